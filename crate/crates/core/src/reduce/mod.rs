//! Affine reduction to the 60 discrete normal forms and 4 parametric
//! families, with witness tracking.
//!
//! Every recipe transforms the working map by explicit invertible steps; the
//! recorded chain replays the canonical representative back onto the exact
//! input, and `classify_affine` refuses to return a witness that does not
//! verify.

mod recipes;
mod reps;

pub use reps::{canonical_representative, family_gen1a, family_gen2, family_gen5, REP_IDS};

use crate::field::{Ctx, FieldError, TowerElem};
use crate::maps::{
    conjugate, verify_witness, MapError, QuadMap, Reducer, SourceAut, TargetAut, WitnessChain,
};
use crate::pencil::{classify_top_ordered, PencilError, PencilProfile, TopType};
use crate::poly::{FieldPolicy, PolyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("top type mismatch in recipe: expected {0:?}")]
    TypeMismatch(TopType),
    #[error("internal reduction failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// An affine equivalence class: one of the 60 discrete forms or a member of
/// one of the 4 parametric families.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineClass {
    /// F_k for k in {3, 5, 6, 7, 9..21, 22..64}.
    Discrete(u8),
    /// (x^2+Bz^2+2Ay, Ay^2+Bz^2+2x+2Bz) with AB != 0 and H_0(A,B) != 0.
    Family1 { a: TowerElem, b: TowerElem },
    /// Same shape with H_0(A,B) = 0, off the exceptional triple.
    Family2 { a: TowerElem, b: TowerElem },
    /// (x^2+z^2+2Ay, Ay^2+z^2+2x) with A not in {0, 1}.
    Family4 { a: TowerElem },
    /// (x^2+z^2+2y, yz+x+Ay) with A^4 != -16.
    Family8 { a: TowerElem },
}

impl AffineClass {
    /// The canonical map the witness chain replays.
    pub fn canonical_map(&self) -> QuadMap {
        match self {
            AffineClass::Discrete(k) => canonical_representative(*k),
            AffineClass::Family1 { a, b } | AffineClass::Family2 { a, b } => family_gen1a(a, b),
            AffineClass::Family4 { a } => family_gen2(a),
            AffineClass::Family8 { a } => family_gen5(a),
        }
    }

    /// Equality of classes with the documented parameter symmetries (A^4 for
    /// the yz-family).
    pub fn same_class(&self, other: &AffineClass) -> bool {
        match (self, other) {
            (AffineClass::Discrete(a), AffineClass::Discrete(b)) => a == b,
            (AffineClass::Family1 { a, b }, AffineClass::Family1 { a: a2, b: b2 })
            | (AffineClass::Family2 { a, b }, AffineClass::Family2 { a: a2, b: b2 }) => {
                a == a2 && b == b2
            }
            (AffineClass::Family4 { a }, AffineClass::Family4 { a: a2 }) => a == a2,
            (AffineClass::Family8 { a }, AffineClass::Family8 { a: a2 }) => {
                a.pow(4) == a2.pow(4)
            }
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            AffineClass::Discrete(k) => format!("F_{}", k),
            AffineClass::Family1 { a, b } => format!("family F_1 at (A, B) = ({}, {})", a, b),
            AffineClass::Family2 { a, b } => format!("family F_2 at (A, B) = ({}, {})", a, b),
            AffineClass::Family4 { a } => format!("family F_4 at A = {}", a),
            AffineClass::Family8 { a } => format!("family F_8 at A = {}", a),
        }
    }
}

/// Result of the affine classification pipeline.
#[derive(Clone, Debug)]
pub enum Classification {
    /// Class decided and witness verified.
    Full { class: AffineClass, top: TopType, chain: WitnessChain },
    /// Class decided but a scaling step needed a field extension the policy
    /// forbids (cube roots outside Q(i), depth bound).
    ClassOnly { class: AffineClass, top: TopType },
    /// Only the top type is decided; the pencil certificate explains why the
    /// witness construction stopped.
    TopOnly { top: TopType, profile: PencilProfile },
}

impl Classification {
    pub fn class(&self) -> Option<&AffineClass> {
        match self {
            Classification::Full { class, .. } | Classification::ClassOnly { class, .. } => {
                Some(class)
            }
            Classification::TopOnly { .. } => None,
        }
    }

    pub fn top(&self) -> TopType {
        match self {
            Classification::Full { top, .. }
            | Classification::ClassOnly { top, .. }
            | Classification::TopOnly { top, .. } => *top,
        }
    }

    pub fn chain(&self) -> Option<&WitnessChain> {
        match self {
            Classification::Full { chain, .. } => Some(chain),
            _ => None,
        }
    }
}

pub(crate) fn is_policy_error(e: &ReduceError) -> bool {
    matches!(
        e,
        ReduceError::Field(FieldError::TowerDepthExceeded(_))
            | ReduceError::Poly(PolyError::CubicOutsidePolicy)
            | ReduceError::Poly(PolyError::Field(FieldError::TowerDepthExceeded(_)))
    )
}

// ---------------------------------------------------------------------------
// small step builders shared by the recipes
// ---------------------------------------------------------------------------

pub(crate) fn src_translate(ctx: &Ctx, d: [TowerElem; 3]) -> SourceAut {
    let mut a = SourceAut::identity(ctx);
    a.translation = d.map(|v| v.lift_to(ctx).unwrap_or(v));
    a
}

pub(crate) fn tgt_translate(ctx: &Ctx, d: [TowerElem; 2]) -> TargetAut {
    let mut a = TargetAut::identity(ctx);
    a.translation = d.map(|v| v.lift_to(ctx).unwrap_or(v));
    a
}

pub(crate) fn src_diag(
    a: &TowerElem,
    b: &TowerElem,
    c: &TowerElem,
) -> Result<SourceAut, ReduceError> {
    let ctx = crate::poly::join_ctx(&crate::poly::join_ctx(a.ctx(), b.ctx())?, c.ctx())?;
    let z = TowerElem::zero(&ctx);
    SourceAut::new(
        [
            [a.lift_to(&ctx).unwrap(), z.clone(), z.clone()],
            [z.clone(), b.lift_to(&ctx).unwrap(), z.clone()],
            [z.clone(), z.clone(), c.lift_to(&ctx).unwrap()],
        ],
        [z.clone(), z.clone(), z],
    )
    .map_err(ReduceError::Map)
}

pub(crate) fn tgt_diag(a: &TowerElem, b: &TowerElem) -> Result<TargetAut, ReduceError> {
    let ctx = crate::poly::join_ctx(a.ctx(), b.ctx())?;
    let z = TowerElem::zero(&ctx);
    TargetAut::new(
        [
            [a.lift_to(&ctx).unwrap(), z.clone()],
            [z.clone(), b.lift_to(&ctx).unwrap()],
        ],
        [z.clone(), z],
    )
    .map_err(ReduceError::Map)
}

pub(crate) fn tgt_swap(ctx: &Ctx) -> TargetAut {
    let z = TowerElem::zero(ctx);
    let o = TowerElem::one(ctx);
    TargetAut::new([[z.clone(), o.clone()], [o, z.clone()]], [z.clone(), z]).unwrap()
}

/// Kill both components' constant terms with a target translation.
pub(crate) fn kill_constants(red: &mut Reducer) {
    let c1 = red.cur.f[9].clone();
    let c2 = red.cur.g[9].clone();
    if c1.is_zero() && c2.is_zero() {
        return;
    }
    let psi = tgt_translate(&red.cur.ctx, [-&c1, -&c2]);
    red.step_target(&psi, "drop constant terms");
}

// ---------------------------------------------------------------------------
// normalize_pair
// ---------------------------------------------------------------------------

/// Target-side normalization: order components by degree and shear away
/// proportional top parts, repeating until either the second component has
/// strictly smaller degree or the two top parts are independent. Constant
/// components are translated to zero.
pub fn normalize_pair(red: &mut Reducer) {
    loop {
        let df = red.cur.deg_f();
        let dg = red.cur.deg_g();
        if df < dg {
            let psi = tgt_swap(&red.cur.ctx);
            red.step_target(&psi, "swap components");
            continue;
        }
        if dg == 0 {
            let c = red.cur.g[9].clone();
            let psi = tgt_translate(&red.cur.ctx, [TowerElem::zero(&red.cur.ctx), -&c]);
            red.step_target(&psi, "drop constant second component");
            continue;
        }
        if df == 0 {
            let c = red.cur.f[9].clone();
            let psi = tgt_translate(&red.cur.ctx, [-&c, TowerElem::zero(&red.cur.ctx)]);
            red.step_target(&psi, "drop constant first component");
            continue;
        }
        if df == dg && df >= 1 {
            let top = red.cur.top_part();
            if let Some(c) = proportionality(&top.f, &top.g) {
                let ctx = red.cur.ctx.clone();
                let one = TowerElem::one(&ctx);
                let zero = TowerElem::zero(&ctx);
                let psi = TargetAut::new(
                    [[one.clone(), zero.clone()], [-&c.lift_to(&ctx).unwrap(), one.clone()]],
                    [zero.clone(), zero],
                )
                .unwrap();
                red.step_target(&psi, "shear away the shared top part");
                continue;
            }
        }
        break;
    }
}

/// If g = c * f on the coefficient vectors, return c.
fn proportionality(f: &[TowerElem; 10], g: &[TowerElem; 10]) -> Option<TowerElem> {
    let i = (0..10).find(|&i| !f[i].is_zero())?;
    let c = g[i].try_div(&f[i]).ok()?;
    for k in 0..10 {
        let lhs = g[k].clone();
        let rhs = &f[k] * &c;
        if lhs != rhs {
            return None;
        }
    }
    Some(c)
}

// ---------------------------------------------------------------------------
// the pipeline
// ---------------------------------------------------------------------------

/// Normalize, classify the top part, run the per-type recipe, and verify the
/// witness chain. Field-policy exhaustion degrades to `ClassOnly`/`TopOnly`
/// instead of failing.
pub fn classify_affine(
    input: &QuadMap,
    policy: FieldPolicy,
) -> Result<Classification, ReduceError> {
    let mut base = Reducer::new(input.clone());
    normalize_pair(&mut base);
    let top = base.cur.top_part();
    let first = classify_top_ordered(&top, policy, 0)?;
    let ty = first.ty;
    if ty == TopType::T1 {
        // enumerate the six root orderings and keep the preferred parameters
        let mut best: Option<(AffineClass, Reducer)> = None;
        let mut last_profile = first.profile.clone();
        for ordering in 0..6 {
            let cls = if ordering == 0 {
                first.clone()
            } else {
                classify_top_ordered(&top, policy, ordering)?
            };
            let Some(w) = cls.witness else {
                last_profile = cls.profile;
                continue;
            };
            let mut red = base.clone_reducer();
            apply_top_witness(&mut red, &w);
            match recipes::reduce_after_t1(&mut red) {
                Ok(class) => {
                    let better = match &best {
                        None => true,
                        Some((cur_best, _)) => prefer_class(&class, cur_best),
                    };
                    if better {
                        best = Some((class, red));
                    }
                }
                Err(e) if is_policy_error(&e) => continue,
                Err(e) => return Err(e),
            }
        }
        return match best {
            Some((class, red)) => finalize(input, class, ty, red),
            None => Ok(Classification::TopOnly { top: ty, profile: last_profile }),
        };
    }
    let Some(w) = first.witness else {
        return Ok(Classification::TopOnly { top: ty, profile: first.profile });
    };
    let mut red = base;
    apply_top_witness(&mut red, &w);
    let snapshot = red.cur.clone();
    let res = match ty {
        TopType::T2 => recipes::reduce_after_t2(&mut red),
        TopType::T4 => recipes::reduce_after_t4(&mut red),
        _ => recipes::reduce_rest(&mut red, ty),
    };
    match res {
        Ok(class) => finalize(input, class, ty, red),
        Err(e) if is_policy_error(&e) => match recipes::decide_without_witness(&snapshot, ty) {
            Some(class) => Ok(Classification::ClassOnly { class, top: ty }),
            None => Ok(Classification::TopOnly { top: ty, profile: first.profile }),
        },
        Err(e) => Err(e),
    }
}

impl Reducer {
    fn clone_reducer(&self) -> Reducer {
        Reducer { cur: self.cur.clone(), chain: self.chain.clone() }
    }
}

/// Apply the inverse of a top-part witness so the working map's top part
/// becomes the type's normal form.
fn apply_top_witness(red: &mut Reducer, w: &WitnessChain) {
    let ctx = red.cur.ctx.clone();
    let (phi, psi) = w.composed(&ctx);
    red.step(&phi.inverse(), &psi.inverse(), "top part onto its normal form");
}

/// Preference between classes reached via different pencil-root orderings:
/// parameters are compared with the deterministic preference order.
fn prefer_class(new: &AffineClass, old: &AffineClass) -> bool {
    use std::cmp::Ordering;
    match (new, old) {
        (AffineClass::Family1 { a, b }, AffineClass::Family1 { a: a2, b: b2 })
        | (AffineClass::Family2 { a, b }, AffineClass::Family2 { a: a2, b: b2 }) => {
            match a.cmp_preference(a2) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => b.cmp_preference(b2) == Ordering::Less,
            }
        }
        (AffineClass::Family4 { a }, AffineClass::Family4 { a: a2 }) => {
            a.cmp_preference(a2) == Ordering::Less
        }
        _ => false,
    }
}

fn finalize(
    input: &QuadMap,
    class: AffineClass,
    top: TopType,
    red: Reducer,
) -> Result<Classification, ReduceError> {
    let canon = class.canonical_map();
    if let Err(diff) = verify_witness(input, &canon, &red.chain) {
        return Err(ReduceError::Internal(format!(
            "witness verification failed for {}: diff {:?}",
            class.label(),
            diff
        )));
    }
    Ok(Classification::Full { class, top, chain: red.chain })
}

/// Classify a conjugate of a known map (fuzzing helper).
pub fn classify_conjugate(
    rep: &QuadMap,
    phi: &SourceAut,
    psi: &TargetAut,
    policy: FieldPolicy,
) -> Result<Classification, ReduceError> {
    let conj = conjugate(rep, phi, psi);
    classify_affine(&conj, policy)
}
