//! Task dispatch: turns a parsed job into a status and a JSON result.

use crate::job::{unlocated, Bounds, InputError, JobFile, Locator, Mode, SemigroupSpec, TaskName, Text};
use bfunc_core::birational::{
    hodge_ideal_zero, jumping_numbers, lct, multiplier_monomial, summand_comparison, vfil_on_ring, vfil_summand,
};
use bfunc_core::bs_solver::{divide_by_s_plus_one, mustata_lift, search_feq, AnsatzSpec, BsError, BsResult};
use bfunc_core::exact_math::{parse_rational, rational_roots, MultiPoly, Rational, VarList};
use bfunc_core::fs_module::{
    verify_feq_formal, verify_feq_specialized, FeqKind, FeqOperator, FeqSpec, FeqTerm, FormalVerdict, FsContext,
    PolynomialRingAction, QuotientRingAction, RingAction, SemigroupRingAction, SpecializedVerdict,
};
use bfunc_core::positive_char::{test_ideal_monomial, test_ideal_summand, DEFAULT_SEARCH_CAP};
use bfunc_core::toric::{
    check_preserves_subring, DiagonalGroup, Semigroup, SubringPreservation, SummandElement, SummandIdeal,
};
use bfunc_core::weyl::{preserves_ideal, ExponentDomain, GeneratedSemigroup, GradedOperator, GradedPiece, WeylContext, WeylOp};
use bfunc_core::MonomialIdeal;
use serde_json::{json, Value};
use std::sync::Arc;

/// Overall verdict of a job, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Refuted,
    NotFound,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Success => "success",
            Status::Refuted => "refuted",
            Status::NotFound => "not-found",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Refuted => 2,
            Status::NotFound => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
}

/// Settings from the command line that override job values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub max_unknowns: Option<usize>,
}

const NOT_FOUND_NOTE: &str =
    "no functional equation exists within these ansatz bounds; this does not show that none exists";

struct Ctx<'a> {
    loc: Locator<'a>,
    vars: Vec<String>,
    overrides: Overrides,
}

enum Domain {
    Toric { semigroup: Semigroup, group: Option<DiagonalGroup> },
    Generated(GeneratedSemigroup),
}

fn input(e: impl std::fmt::Display) -> InputError {
    unlocated(e.to_string())
}

impl Ctx<'_> {
    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn ring(&self) -> VarList {
        VarList::new(&self.vars)
    }

    fn poly(&self, t: &Text, vars: &VarList) -> Result<MultiPoly, InputError> {
        MultiPoly::parse(t.get_ref(), vars).map_err(|e| self.loc.text(t, e))
    }

    fn rational(&self, t: &Text) -> Result<Rational, InputError> {
        parse_rational(t.get_ref().trim()).ok_or_else(|| self.loc.text(t, "expected an exact rational such as 3/2"))
    }

    fn polys(&self, ts: &[Text]) -> Result<Vec<MultiPoly>, InputError> {
        let vars = self.ring();
        ts.iter().map(|t| self.poly(t, &vars)).collect()
    }

    fn exponents(&self, gens: &[Vec<u32>], what: &str) -> Result<(), InputError> {
        if gens.is_empty() {
            return Err(unlocated(format!("{what} needs at least one generator")));
        }
        for g in gens {
            if g.len() != self.dim() {
                return Err(unlocated(format!(
                    "{what} generator {g:?} has length {}, the ring has {} variables",
                    g.len(),
                    self.dim()
                )));
            }
        }
        Ok(())
    }

    fn ideal(&self, gens: &[Vec<u32>]) -> Result<MonomialIdeal, InputError> {
        self.exponents(gens, "ideal")?;
        Ok(MonomialIdeal::new(self.dim(), gens.to_vec()))
    }

    fn domain(&self, spec: &SemigroupSpec) -> Result<Domain, InputError> {
        let forms = [spec.basis.is_some(), spec.generators.is_some(), spec.weights.is_some() || spec.orders.is_some()];
        if forms.iter().filter(|&&b| b).count() != 1 {
            return Err(unlocated("[semigroup] needs exactly one of basis, generators, or weights with orders"));
        }
        if spec.subspace.is_some() && spec.basis.is_none() {
            return Err(unlocated("[semigroup] subspace requires basis"));
        }
        if let Some(gens) = &spec.generators {
            self.exponents(gens, "semigroup")?;
            return Ok(Domain::Generated(GeneratedSemigroup::new(self.dim(), gens.clone())));
        }
        if let Some(basis) = &spec.basis {
            let subspace = spec
                .subspace
                .iter()
                .flatten()
                .map(|row| row.iter().map(|t| self.rational(t)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let semigroup = Semigroup::new(basis.clone(), subspace).map_err(input)?;
            if semigroup.dim() != self.dim() {
                return Err(unlocated("semigroup dimension differs from the number of ring variables"));
            }
            return Ok(Domain::Toric { semigroup, group: None });
        }
        let (Some(w), Some(o)) = (&spec.weights, &spec.orders) else {
            return Err(unlocated("[semigroup] weights and orders must be given together"));
        };
        let group = DiagonalGroup::new(self.dim(), w.clone(), o.clone()).map_err(input)?;
        Ok(Domain::Toric {
            semigroup: group.to_semigroup(),
            group: Some(group),
        })
    }

    fn toric(&self, job: &JobFile) -> Result<Option<(Semigroup, Option<DiagonalGroup>)>, InputError> {
        match &job.semigroup {
            None => Ok(None),
            Some(spec) => match self.domain(spec)? {
                Domain::Toric { semigroup, group } => Ok(Some((semigroup, group))),
                Domain::Generated(_) => Err(unlocated("this task needs a lattice semigroup, not monoid generators")),
            },
        }
    }

    fn require_toric(&self, job: &JobFile) -> Result<(Semigroup, Option<DiagonalGroup>), InputError> {
        self.toric(job)?
            .ok_or_else(|| unlocated(format!("task {} needs a [semigroup] table", job.task.get_ref().as_str())))
    }

    fn kind(&self, kind: &Option<Text>, l: usize, has_g: bool) -> Result<FeqKind, InputError> {
        match kind {
            Some(t) => FeqKind::from_name(t.get_ref())
                .ok_or_else(|| self.loc.text(t, "kind must be principal, relative, or bmsMulti")),
            None if l > 1 => Ok(FeqKind::BmsMulti),
            None if has_g => Ok(FeqKind::Relative),
            None => Ok(FeqKind::Principal),
        }
    }

    fn ansatz(&self, kind: FeqKind, l: usize, b: &Bounds) -> AnsatzSpec {
        let mut a = match kind {
            FeqKind::BmsMulti => AnsatzSpec::bms(l, b.max_order, b.max_s_degree, b.max_coeff_degree, b.max_b_degree),
            _ => AnsatzSpec::principal(b.max_order, b.max_s_degree, b.max_coeff_degree, b.max_b_degree),
        };
        a.kind = kind;
        if let Some(m) = self.overrides.max_unknowns.or(b.max_unknowns) {
            a.max_unknowns = m;
        }
        a
    }
}

fn s_vars() -> VarList {
    VarList::new(&["s"])
}

fn ideal_json(i: &MonomialIdeal) -> Value {
    json!({ "generators": i.generators(), "text": i.to_string() })
}

fn summand_ideal_json(i: &SummandIdeal) -> Value {
    json!({ "generators": i.generators(), "text": i.to_string() })
}

fn roots_json(b: &MultiPoly) -> Value {
    match rational_roots(b) {
        Ok(roots) => Value::Array(
            roots
                .iter()
                .map(|(r, m)| json!({ "root": r.to_string(), "multiplicity": m }))
                .collect(),
        ),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

/// Runs a validated job.
pub fn run(job: &JobFile, src: &str, overrides: Overrides) -> Result<Outcome, InputError> {
    let ctx = Ctx {
        loc: Locator { src },
        vars: job.ring.vars.get_ref().clone(),
        overrides,
    };
    match job.task.get_ref() {
        TaskName::VerifyFeq => verify_feq(&ctx, job),
        TaskName::BsSearch => bs_search(&ctx, job),
        TaskName::RestrictOp => restrict_op(&ctx, job),
        TaskName::CheckExtensible => check_extensible(&ctx, job),
        TaskName::TestIdeal => test_ideal(&ctx, job),
        TaskName::Multiplier => multiplier(&ctx, job),
        TaskName::Lct => lct_task(&ctx, job),
        TaskName::JumpingNumbers => jumping(&ctx, job),
        TaskName::Vfil => vfil(&ctx, job),
        TaskName::Hodge0 => hodge0(&ctx, job),
        TaskName::CompareSummand => compare_summand(&ctx, job),
        TaskName::MustataCheck => mustata_check(&ctx, job),
    }
}

fn verify_feq(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.verify_feq.as_ref().expect("payload checked at parse time");
    let f = ctx.polys(&p.f)?;
    let l = f.len();
    let fs = FsContext::new(&ctx.vars, f).map_err(input)?;
    let g = p.g.as_ref().map(|t| ctx.poly(t, &ctx.ring())).transpose()?;
    let kind = ctx.kind(&p.kind, l, g.is_some())?;
    let mut terms = Vec::new();
    for t in &p.terms {
        let op = match (&t.op, &t.pieces) {
            (Some(src), None) => {
                if t.theta.is_some() || t.declared_order.is_some() {
                    return Err(ctx.loc.text(src, "theta and declared_order belong to graded operators"));
                }
                FeqOperator::Weyl(WeylOp::parse(src.get_ref(), fs.weyl()).map_err(|e| ctx.loc.text(src, e))?)
            }
            (None, Some(pieces)) => {
                let theta = VarList::new(
                    t.theta
                        .as_ref()
                        .ok_or_else(|| unlocated("graded operator terms need theta"))?,
                );
                let pieces = pieces
                    .iter()
                    .map(|pc| {
                        Ok(GradedPiece {
                            shift: pc.shift.clone(),
                            num: ctx.poly(&pc.num, &theta)?,
                            den: ctx.poly(&pc.den, &theta)?,
                        })
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                FeqOperator::Graded(GradedOperator::new(theta, pieces, t.declared_order).map_err(input)?)
            }
            _ => return Err(unlocated("each term needs exactly one of op or pieces")),
        };
        terms.push(FeqTerm { c: t.c.clone(), op });
    }
    let b = ctx.poly(&p.b, &s_vars())?;
    let spec = FeqSpec::new(&fs, kind, g, terms, b.clone()).map_err(input)?;

    let all_weyl = spec.terms().iter().all(|t| matches!(t.op, FeqOperator::Weyl(_)));
    let quotient = p.quotient.as_ref().map(|q| ctx.ideal(q)).transpose()?;
    let domain = match &job.semigroup {
        Some(s) => Some(ctx.domain(s)?),
        None => None,
    };
    if quotient.is_some() && domain.is_some() {
        return Err(unlocated("a job may give a quotient or a semigroup, not both"));
    }
    let plain_ring = quotient.is_none() && domain.is_none();
    let mode = p.mode.unwrap_or(if all_weyl && plain_ring { Mode::Both } else { Mode::Specialized });
    if mode != Mode::Specialized && !(all_weyl && plain_ring) {
        return Err(unlocated("formal verification needs Weyl operators over the polynomial ring"));
    }

    let mut status = Status::Success;
    let mut result = serde_json::Map::new();
    result.insert("f".into(), json!(fs.f().iter().map(|q| q.to_string()).collect::<Vec<_>>()));
    result.insert("kind".into(), json!(kind.name()));
    result.insert("b".into(), json!(b.to_string()));
    result.insert("b_roots".into(), roots_json(&b));

    if let Some(ideal) = &quotient {
        let mut checks = Vec::new();
        for (k, t) in spec.terms().iter().enumerate() {
            let FeqOperator::Weyl(op) = &t.op else {
                checks.push(json!({ "term": k, "preserved": Value::Null, "reason": "graded operator" }));
                continue;
            };
            let r = preserves_ideal(op, ideal).map_err(input)?;
            if !r.preserved {
                status = Status::Refuted;
            }
            checks.push(json!({
                "term": k,
                "preserved": r.preserved,
                "regions_checked": r.regions_checked,
                "witness": r.witness.map(|w| json!({
                    "exponent": w.exponent,
                    "shift": w.shift,
                    "image": w.image.to_string(),
                })),
            }));
        }
        result.insert("quotient".into(), ideal_json(ideal));
        result.insert("preserves_ideal".into(), Value::Array(checks));
    }

    if mode != Mode::Specialized {
        let v = verify_feq_formal(&spec).map_err(input)?;
        let j = match v {
            FormalVerdict::Verified => json!({ "verdict": "verified" }),
            FormalVerdict::Refuted { discrepancy } => {
                status = Status::Refuted;
                json!({ "verdict": "refuted", "discrepancy": discrepancy.to_string() })
            }
        };
        result.insert("formal".into(), j);
    }
    if mode != Mode::Formal {
        let action: Box<dyn RingAction> = match (&quotient, domain) {
            (Some(ideal), _) => Box::new(QuotientRingAction { ideal: ideal.clone() }),
            (None, Some(Domain::Toric { semigroup, .. })) => Box::new(SemigroupRingAction {
                domain: Arc::new(semigroup) as Arc<dyn ExponentDomain>,
            }),
            (None, Some(Domain::Generated(g))) => Box::new(SemigroupRingAction {
                domain: Arc::new(g) as Arc<dyn ExponentDomain>,
            }),
            (None, None) => Box::new(PolynomialRingAction),
        };
        let v = verify_feq_specialized(&spec, action.as_ref(), p.grid_bound).map_err(input)?;
        let j = match v {
            SpecializedVerdict::Verified { grid_bound, points } => {
                json!({ "verdict": "verified", "grid_bound": grid_bound, "points": points })
            }
            SpecializedVerdict::Refuted { t, lhs, rhs } => {
                status = Status::Refuted;
                json!({ "verdict": "refuted", "t": t, "lhs": lhs.to_string(), "rhs": rhs.to_string() })
            }
        };
        result.insert("specialized".into(), j);
    }
    Ok(Outcome {
        status,
        result: Value::Object(result),
    })
}

fn search_json(r: &BsResult) -> Value {
    let witness: Vec<Value> = r
        .witness
        .terms()
        .iter()
        .map(|t| {
            let op = match &t.op {
                FeqOperator::Weyl(w) => w.to_string(),
                FeqOperator::Graded(_) => "graded".to_string(),
            };
            json!({ "c": t.c, "op": op })
        })
        .collect();
    json!({
        "b": r.b.to_string(),
        "b_roots": roots_json(&r.b),
        "certificate": match r.certificate { FormalVerdict::Verified => "verified", _ => "refuted" },
        "minimal_within_bounds": r.minimal_within_bounds,
        "infeasible_degrees": r.infeasible_degrees,
        "unknowns": r.unknowns,
        "witness": witness,
    })
}

fn not_found(e: &BsError) -> Option<Value> {
    match e {
        BsError::NotFoundWithinBounds { max_b_degree } => Some(json!({
            "found": false,
            "max_b_degree": max_b_degree,
            "note": NOT_FOUND_NOTE,
        })),
        BsError::CapExceeded { unknowns, cap } => Some(json!({
            "found": false,
            "skipped_by_cap": { "unknowns": unknowns, "cap": cap },
            "note": NOT_FOUND_NOTE,
        })),
        _ => None,
    }
}

fn bs_search(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.bs_search.as_ref().expect("payload checked at parse time");
    let f = ctx.polys(&p.f)?;
    let l = f.len();
    let fs = FsContext::new(&ctx.vars, f).map_err(input)?;
    let g = p.g.as_ref().map(|t| ctx.poly(t, &ctx.ring())).transpose()?;
    let kind = ctx.kind(&p.kind, l, g.is_some())?;
    let mut ansatz = ctx.ansatz(kind, l, &p.bounds());
    if let Some(cv) = &p.c_vectors {
        ansatz.c_vectors = cv.clone();
    }
    if p.summand {
        ansatz.subring = Some(ctx.require_toric(job)?.0);
    }
    match search_feq(&fs, g.as_ref(), &ansatz) {
        Ok(r) => {
            let status = if r.certificate == FormalVerdict::Verified {
                Status::Success
            } else {
                Status::Refuted
            };
            let mut j = search_json(&r);
            j["found"] = json!(true);
            j["summand"] = json!(p.summand);
            Ok(Outcome { status, result: j })
        }
        Err(e) => match not_found(&e) {
            Some(j) => Ok(Outcome {
                status: Status::NotFound,
                result: j,
            }),
            None => Err(input(e)),
        },
    }
}

fn restrict_op(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.restrict_op.as_ref().expect("payload checked at parse time");
    let (s, _) = ctx.require_toric(job)?;
    let svars = p.s_vars.clone().unwrap_or_default();
    let wctx = WeylContext::new(&ctx.vars, &svars);
    let op = WeylOp::parse(p.op.get_ref(), &wctx).map_err(|e| ctx.loc.text(&p.op, e))?;
    let mut status = Status::Success;
    let preservation = match check_preserves_subring(&s, &op, p.degree_bound).map_err(input)? {
        SubringPreservation::PreservedUpToBound { bound, exact } => {
            json!({ "preserved": true, "bound": bound, "exact": exact })
        }
        SubringPreservation::Counterexample { exponent, image } => {
            status = Status::Refuted;
            json!({ "preserved": false, "exponent": exponent, "image": image.to_string() })
        }
    };
    let mut result = json!({ "operator": op.to_string(), "preservation": preservation });
    if let Some(a) = &p.apply_to {
        let poly = ctx.poly(a, wctx.ring_vars())?;
        let elem = SummandElement::new(&s, poly).map_err(|e| ctx.loc.text(a, e))?;
        let values = p
            .s_values
            .as_ref()
            .map(|v| v.iter().map(|t| ctx.rational(t)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        let img = s.restrict_operator(&op).apply(&elem, values.as_deref()).map_err(input)?;
        result["image"] = json!(img.poly().to_string());
    }
    Ok(Outcome { status, result })
}

fn check_extensible(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.check_extensible.as_ref().expect("payload checked at parse time");
    let (s, group) = ctx.require_toric(job)?;
    let surject = s.projections_surject();
    let index = s.index();
    let mut result = json!({
        "basis": s.basis(),
        "index": index,
        "coordinate_gcds": s.coordinate_gcds(),
        "projections_surject": surject,
        "has_subspace": s.has_subspace(),
    });
    if let Some(p) = p.p {
        result["p"] = json!(p);
        result["p_divides_index"] = json!(index % p == 0);
        result["cartier_extensible"] = json!(surject && index % p != 0);
    } else {
        result["cartier_extensible"] = json!(surject);
    }
    if let Some(g) = group {
        result["group"] = json!({
            "order": g.order(),
            "exponent": g.exponent(),
            "contains_pseudoreflection": g.fixes_hyperplane(),
        });
    }
    Ok(Outcome {
        status: Status::Success,
        result,
    })
}

fn test_ideal(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.test_ideal.as_ref().expect("payload checked at parse time");
    let ideal = ctx.ideal(&p.ideal)?;
    let lambda = ctx.rational(&p.lambda)?;
    let cap = p.cap.map_or(DEFAULT_SEARCH_CAP, u128::from);
    if let Some((s, _)) = ctx.toric(job)? {
        let r = test_ideal_summand(&s, &p.ideal, &lambda, p.p, p.e_max, cap).map_err(input)?;
        let status = if !r.agree {
            Status::Refuted
        } else if r.intrinsic_stabilized_at.is_none() || r.polynomial.stabilized_at.is_none() {
            Status::NotFound
        } else {
            Status::Success
        };
        let result = json!({
            "lambda": lambda.to_string(),
            "p": p.p,
            "intrinsic": summand_ideal_json(&r.intrinsic),
            "intrinsic_stabilized_at": r.intrinsic_stabilized_at,
            "retraction": summand_ideal_json(&r.retraction),
            "polynomial": ideal_json(&r.polynomial.ideal),
            "polynomial_stabilized_at": r.polynomial.stabilized_at,
            "agree": r.agree,
            "cartier_extensible": r.cartier_extensible,
        });
        return Ok(Outcome { status, result });
    }
    let r = test_ideal_monomial(&ideal, &lambda, p.p, p.e_max, cap).map_err(input)?;
    let status = if r.stabilized_at.is_some() {
        Status::Success
    } else {
        Status::NotFound
    };
    let result = json!({
        "lambda": lambda.to_string(),
        "p": p.p,
        "levels": r.levels.iter().map(ideal_json).collect::<Vec<_>>(),
        "ideal": ideal_json(&r.ideal),
        "stabilized_at": r.stabilized_at,
        "capped": r.capped,
    });
    Ok(Outcome { status, result })
}

fn success(result: Value) -> Result<Outcome, InputError> {
    Ok(Outcome {
        status: Status::Success,
        result,
    })
}

fn multiplier(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.multiplier.as_ref().expect("payload checked at parse time");
    let lambda = ctx.rational(&p.lambda)?;
    let j = multiplier_monomial(&ctx.ideal(&p.ideal)?, &lambda).map_err(input)?;
    success(json!({ "lambda": lambda.to_string(), "ideal": ideal_json(&j) }))
}

fn lct_task(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.lct.as_ref().expect("payload checked at parse time");
    let c = lct(&ctx.ideal(&p.ideal)?).map_err(input)?;
    success(json!({ "lct": c.to_string() }))
}

fn jumping(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.jumping_numbers.as_ref().expect("payload checked at parse time");
    let bound = ctx.rational(&p.bound)?;
    let j = jumping_numbers(&ctx.ideal(&p.ideal)?, &bound).map_err(input)?;
    success(json!({ "bound": bound.to_string(), "jumping_numbers": rationals_json(&j) }))
}

fn vfil(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.vfil.as_ref().expect("payload checked at parse time");
    let alpha = ctx.rational(&p.alpha)?;
    let ideal = ctx.ideal(&p.ideal)?;
    let result = match ctx.toric(job)? {
        Some((s, _)) => {
            let v = vfil_summand(&s, &p.ideal, &alpha).map_err(input)?;
            json!({ "alpha": alpha.to_string(), "summand": summand_ideal_json(&v) })
        }
        None => {
            let v = vfil_on_ring(&ideal, &alpha).map_err(input)?;
            json!({ "alpha": alpha.to_string(), "ideal": ideal_json(&v) })
        }
    };
    success(result)
}

fn hodge0(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.hodge0.as_ref().expect("payload checked at parse time");
    let f = ctx.poly(&p.f, &ctx.ring())?;
    let lambda = ctx.rational(&p.lambda)?;
    let h = hodge_ideal_zero(&f, &lambda).map_err(|e| ctx.loc.text(&p.f, e))?;
    success(json!({ "f": f.to_string(), "lambda": lambda.to_string(), "ideal": ideal_json(&h) }))
}

fn compare_summand(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.compare_summand.as_ref().expect("payload checked at parse time");
    let (s, _) = ctx.require_toric(job)?;
    ctx.exponents(&p.ideal, "ideal")?;
    let lambda = ctx.rational(&p.lambda)?;
    let r = summand_comparison(&s, &p.ideal, &lambda).map_err(input)?;
    let status = if r.matches == Some(false) {
        Status::Refuted
    } else {
        Status::Success
    };
    let result = json!({
        "lambda": lambda.to_string(),
        "intersection": summand_ideal_json(&r.intersection),
        "intrinsic": r.intrinsic.as_ref().map(summand_ideal_json),
        "matches": r.matches,
        "extensible": r.extensible,
        "note": r.note,
    });
    Ok(Outcome { status, result })
}

fn mustata_check(ctx: &Ctx, job: &JobFile) -> Result<Outcome, InputError> {
    let p = job.mustata_check.as_ref().expect("payload checked at parse time");
    let f = ctx.polys(&p.f)?;
    let l = f.len();
    let fs = FsContext::new(&ctx.vars, f.clone()).map_err(input)?;
    let (h, hctx) = mustata_lift(&ctx.vars, &f).map_err(input)?;
    let kind = if l > 1 { FeqKind::BmsMulti } else { FeqKind::Principal };
    let tuple = search_feq(&fs, None, &ctx.ansatz(kind, l, &p.tuple));
    let lift = search_feq(&hctx, None, &ctx.ansatz(FeqKind::Principal, 1, &p.lift));
    let part = |r: &Result<BsResult, BsError>| -> Result<Value, InputError> {
        match r {
            Ok(r) => {
                let mut j = search_json(r);
                j["found"] = json!(true);
                Ok(j)
            }
            Err(e) => not_found(e).ok_or_else(|| input(e)),
        }
    };
    let mut result = json!({
        "h": h.to_string(),
        "tuple": part(&tuple)?,
        "lift": part(&lift)?,
    });
    let status = match (&tuple, &lift) {
        (Ok(t), Ok(h)) => {
            let expected = &(&MultiPoly::var_index(t.b.vars(), 0) + &MultiPoly::one(t.b.vars())) * &t.b;
            let consistent = expected == h.b;
            result["expected_lift_b"] = json!(expected.to_string());
            result["consistent"] = json!(consistent);
            if let Ok(q) = divide_by_s_plus_one(&h.b) {
                result["lift_b_over_s_plus_1"] = json!(q.to_string());
            }
            if consistent {
                Status::Success
            } else {
                Status::Refuted
            }
        }
        _ => Status::NotFound,
    };
    Ok(Outcome { status, result })
}
