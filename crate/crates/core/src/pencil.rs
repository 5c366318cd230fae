//! Classification of homogeneous pairs into the 21 linear types.
//!
//! For a pair of independent quadratic forms the invariants are the pencil
//! determinant det(lambda*M_f + mu*M_g) — a binary cubic — together with the
//! multiplicities of its roots and the ranks of the singular pencil members
//! at multiple roots. The type decision never extracts roots (multiplicity
//! and rank data suffice); root extraction happens only when building a
//! linear witness to the normal form, and only the three-distinct-roots case
//! can require extending the coefficient tower.

use crate::field::{Ctx, FieldError, TowerElem};
use crate::linalg::{
    bilin3, complete_basis3, cross3, det3, eval_form3, inv3, is_zero_vec, kernel, matmul3, matvec3,
    rank, sym3_to_mat, Mat,
};
use crate::maps::{QuadMap, Reducer, SourceAut, TargetAut, WitnessChain};
use crate::poly::{
    join_ctx, ring_xyz, squarefree_profile, udeg, udivmod, ugcd, uroots_in_tower, utrim,
    FieldPolicy, Poly, PolyError, Ring, Var,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("components are not homogeneous")]
    NotHomogeneous,
    #[error("components are proportional; normalize the pair first")]
    DependentPair,
    #[error("component degrees unsupported: ({0}, {1})")]
    DegreeMismatch(i32, i32),
    #[error("internal classification failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The 21 linear equivalence classes of homogeneous pairs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub enum TopType {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    T16,
    T17,
    T18,
    T19,
    T20,
    T21,
}

pub const ALL_TOP_TYPES: [TopType; 21] = [
    TopType::T1,
    TopType::T2,
    TopType::T3,
    TopType::T4,
    TopType::T5,
    TopType::T6,
    TopType::T7,
    TopType::T8,
    TopType::T9,
    TopType::T10,
    TopType::T11,
    TopType::T12,
    TopType::T13,
    TopType::T14,
    TopType::T15,
    TopType::T16,
    TopType::T17,
    TopType::T18,
    TopType::T19,
    TopType::T20,
    TopType::T21,
];

impl TopType {
    pub fn index(self) -> usize {
        ALL_TOP_TYPES.iter().position(|&t| t == self).unwrap() + 1
    }

    /// The normal form for the type.
    pub fn canonical(self, ctx: &Ctx) -> QuadMap {
        // monomial order: x^2, xy, xz, y^2, yz, z^2, x, y, z, 1
        let (f, g): ([i64; 10], [i64; 10]) = match self {
            TopType::T1 => ([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 1, 0, 0, 0, 0]),
            TopType::T2 => ([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
            TopType::T3 => ([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
            TopType::T4 => ([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 0, 0, 0, 0]),
            TopType::T5 => ([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
            TopType::T6 => ([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
            TopType::T7 => ([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
            TopType::T8 => ([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
            TopType::T9 => ([1, 0, 0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
            TopType::T10 => ([1, 0, 0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
            TopType::T11 => ([1, 0, 0, 1, 0, 1, 0, 0, 0, 0], [0; 10]),
            TopType::T12 => ([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
            TopType::T13 => ([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
            TopType::T14 => ([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
            TopType::T15 => ([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0; 10]),
            TopType::T16 => ([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
            TopType::T17 => ([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
            TopType::T18 => ([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0; 10]),
            TopType::T19 => ([0, 0, 0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
            TopType::T20 => ([0, 0, 0, 0, 0, 0, 1, 0, 0, 0], [0; 10]),
            TopType::T21 => ([0; 10], [0; 10]),
        };
        QuadMap::from_ints(ctx, f, g)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DegenerateData {
    /// All members share a linear factor.
    CommonFactor,
    /// All members share a singular point; no common factor.
    CommonKernel,
}

/// The certificate behind a type decision.
#[derive(Clone, Debug)]
pub struct PencilProfile {
    /// det(lambda M_f + mu M_g) when both components have degree 2.
    pub det_cubic: Option<Poly>,
    /// (multiplicity, number of roots with that multiplicity)
    pub root_profile: Vec<(u32, u32)>,
    /// (multiplicity, rank of the singular member) for multiple roots.
    pub ranks_at_roots: Vec<(u32, usize)>,
    pub degenerate: Option<DegenerateData>,
}

impl PencilProfile {
    fn empty() -> Self {
        PencilProfile {
            det_cubic: None,
            root_profile: Vec::new(),
            ranks_at_roots: Vec::new(),
            degenerate: None,
        }
    }
}

#[derive(Clone)]
pub struct TopClassification {
    pub ty: TopType,
    /// Chain with `chain.apply(ty.canonical(..)) == input`, when the needed
    /// field extensions stay within policy.
    pub witness: Option<WitnessChain>,
    pub profile: PencilProfile,
}

// ---------------------------------------------------------------------------
// quadratic-form matrices and the pencil cubic
// ---------------------------------------------------------------------------

/// Symmetric matrix of the degree-2 part of a component.
pub fn sym_matrix(c: &[TowerElem; 10], ctx: &Ctx) -> [[TowerElem; 3]; 3] {
    let half = TowerElem::from_ratio(ctx, 1, 2);
    let h = |i: usize| &c[i].lift_to(ctx).unwrap() * &half;
    let e = |i: usize| c[i].lift_to(ctx).unwrap();
    [[e(0), h(1), h(2)], [h(1), e(3), h(4)], [h(2), h(4), e(5)]]
}

/// Coefficient vector (degree-2 slots only) of a symmetric matrix.
pub fn sym_to_coeffs(m: &[[TowerElem; 3]; 3], ctx: &Ctx) -> [TowerElem; 10] {
    let two = TowerElem::from_int(ctx, 2);
    [
        m[0][0].clone(),
        &m[0][1] * &two,
        &m[0][2] * &two,
        m[1][1].clone(),
        &m[1][2] * &two,
        m[2][2].clone(),
        TowerElem::zero(ctx),
        TowerElem::zero(ctx),
        TowerElem::zero(ctx),
        TowerElem::zero(ctx),
    ]
}

/// Coefficients [c30, c21, c12, c03] of det(lambda A + mu B) as a binary
/// cubic c30 l^3 + c21 l^2 m + c12 l m^2 + c03 m^3.
pub fn pencil_cubic_coeffs(a: &[[TowerElem; 3]; 3], b: &[[TowerElem; 3]; 3]) -> [TowerElem; 4] {
    let col = |m: &[[TowerElem; 3]; 3], j: usize| -> [TowerElem; 3] {
        std::array::from_fn(|i| m[i][j].clone())
    };
    let det_cols = |c0: &[TowerElem; 3], c1: &[TowerElem; 3], c2: &[TowerElem; 3]| -> TowerElem {
        let m: [[TowerElem; 3]; 3] =
            std::array::from_fn(|i| [c0[i].clone(), c1[i].clone(), c2[i].clone()]);
        det3(&m)
    };
    let (a0, a1, a2) = (col(a, 0), col(a, 1), col(a, 2));
    let (b0, b1, b2) = (col(b, 0), col(b, 1), col(b, 2));
    let c30 = det3(a);
    let c03 = det3(b);
    let c21 = &(&det_cols(&b0, &a1, &a2) + &det_cols(&a0, &b1, &a2)) + &det_cols(&a0, &a1, &b2);
    let c12 = &(&det_cols(&a0, &b1, &b2) + &det_cols(&b0, &a1, &b2)) + &det_cols(&b0, &b1, &a2);
    [c30, c21, c12, c03]
}

/// det(lambda M_f + mu M_g) as a polynomial in (lambda, mu).
pub fn pencil_cubic(ft: &QuadMap) -> Result<Poly, PencilError> {
    check_homogeneous(ft)?;
    if ft.deg_f() != 2 || ft.deg_g() != 2 {
        return Err(PencilError::DegreeMismatch(ft.deg_f(), ft.deg_g()));
    }
    let mf = sym_matrix(&ft.f, &ft.ctx);
    let mg = sym_matrix(&ft.g, &ft.ctx);
    let c = pencil_cubic_coeffs(&mf, &mg);
    let ring = Ring::new(vec![Var::Lambda, Var::Mu]);
    let l = Poly::var(&ring, &ft.ctx, Var::Lambda);
    let m = Poly::var(&ring, &ft.ctx, Var::Mu);
    let mut out = Poly::zero(&ring, &ft.ctx);
    for (k, coeff) in c.iter().enumerate() {
        let term = &l.pow(3 - k as u32) * &m.pow(k as u32);
        out = &out + &term.scale(coeff);
    }
    Ok(out)
}

fn check_homogeneous(ft: &QuadMap) -> Result<(), PencilError> {
    let comp_ok = |c: &[TowerElem; 10]| -> bool {
        match QuadMap::component_degree(c) {
            -1 => true,
            0 => false, // nonzero constants have no homogeneous type here
            1 => c[..6].iter().all(|k| k.is_zero()) && c[9].is_zero(),
            _ => c[6..].iter().all(|k| k.is_zero()),
        }
    };
    if comp_ok(&ft.f) && comp_ok(&ft.g) {
        Ok(())
    } else {
        Err(PencilError::NotHomogeneous)
    }
}

// ---------------------------------------------------------------------------
// binary cubic root bookkeeping
// ---------------------------------------------------------------------------

/// A point (lambda : mu) of the projective line.
#[derive(Clone, Debug)]
pub struct ProjRoot {
    pub lambda: TowerElem,
    pub mu: TowerElem,
}

impl ProjRoot {
    fn finite(r: TowerElem) -> Self {
        let one = TowerElem::one(r.ctx());
        ProjRoot { lambda: r, mu: one }
    }

    fn infinity(ctx: &Ctx) -> Self {
        ProjRoot { lambda: TowerElem::one(ctx), mu: TowerElem::zero(ctx) }
    }

    pub fn member(
        &self,
        mf: &[[TowerElem; 3]; 3],
        mg: &[[TowerElem; 3]; 3],
    ) -> [[TowerElem; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                &(&self.lambda * &mf[i][j].lift_to(self.lambda.ctx()).unwrap())
                    + &(&self.mu * &mg[i][j].lift_to(self.lambda.ctx()).unwrap())
            })
        })
    }
}

/// Dehomogenized coefficients p(t) = cubic(t, 1), little-endian, plus the
/// multiplicity of the root at infinity (1:0).
fn dehomogenize(c: &[TowerElem; 4]) -> (Vec<TowerElem>, u32) {
    let mut p = vec![c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()];
    utrim(&mut p);
    let deg = if p.iter().all(|x| x.is_zero()) { 0 } else { udeg(&p) };
    (p, 3 - deg as u32)
}

/// (multiplicity, count) profile of the projective roots.
fn cubic_root_profile(c: &[TowerElem; 4], ctx: &Ctx) -> Result<Vec<(u32, u32)>, PencilError> {
    let (p, inf_mult) = dehomogenize(c);
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    if inf_mult > 0 {
        *counts.entry(inf_mult).or_insert(0) += 1;
    }
    if udeg(&p) > 0 {
        let ring = Ring::new(vec![Var::T]);
        let poly = Poly::from_univar(&ring, Var::T, &p, ctx);
        for (m, d) in squarefree_profile(&poly, Var::T)? {
            *counts.entry(m).or_insert(0) += d;
        }
    }
    Ok(counts.into_iter().collect())
}

/// The unique multiple root (always rational over the coefficient field) and
/// its multiplicity, when the profile is [2,1] or [3].
fn cubic_multiple_root(
    c: &[TowerElem; 4],
    ctx: &Ctx,
) -> Result<Option<(ProjRoot, u32)>, PencilError> {
    let (p, inf_mult) = dehomogenize(c);
    if inf_mult >= 2 {
        return Ok(Some((ProjRoot::infinity(ctx), inf_mult)));
    }
    if udeg(&p) == 0 {
        return Ok(None);
    }
    let g = ugcd(&p, &crate::poly::uderiv(&p, ctx), ctx);
    match udeg(&g) {
        0 => Ok(None),
        1 => {
            let r = -&g[0];
            let lin = vec![g[0].clone(), TowerElem::one(ctx)];
            let sq = crate::poly::umul(&lin, &lin, ctx);
            let (q, rem) = udivmod(&p, &sq, ctx)?;
            debug_assert!(crate::poly::u_is_zero(&rem));
            let mult = if udeg(&q) >= 1 {
                let s = -&(q[0].try_div(&q[1])?);
                if s == r {
                    3
                } else {
                    2
                }
            } else {
                2
            };
            Ok(Some((ProjRoot::finite(r), mult)))
        }
        2 => {
            let gg = ugcd(&g, &crate::poly::uderiv(&g, ctx), ctx);
            let r = -&gg[0];
            Ok(Some((ProjRoot::finite(r), 3)))
        }
        _ => Err(PencilError::Internal("cubic gcd degree out of range".into())),
    }
}

/// All three roots with multiplicity, splitting the cubic if necessary.
fn cubic_all_roots(
    c: &[TowerElem; 4],
    ctx: &Ctx,
    policy: FieldPolicy,
) -> Result<(Vec<(ProjRoot, u32)>, Ctx), PolyError> {
    let (p, inf_mult) = dehomogenize(c);
    let mut out = Vec::new();
    let mut cur = ctx.clone();
    if udeg(&p) > 0 {
        let (roots, c2) = uroots_in_tower(&p, ctx, policy)?;
        cur = c2;
        for (r, m) in roots {
            out.push((ProjRoot::finite(r), m));
        }
    }
    if inf_mult > 0 {
        out.push((ProjRoot::infinity(&cur), inf_mult));
    }
    for (r, _) in &mut out {
        r.lambda = r.lambda.lift_to(&cur).unwrap_or_else(|_| r.lambda.clone());
        r.mu = r.mu.lift_to(&cur).unwrap_or_else(|_| r.mu.clone());
    }
    Ok((out, cur))
}

// ---------------------------------------------------------------------------
// shared witness helpers
// ---------------------------------------------------------------------------

fn source_from_columns(cols: [[TowerElem; 3]; 3]) -> Result<SourceAut, PencilError> {
    let mut ctx = cols[0][0].ctx().clone();
    for c in cols.iter().flatten() {
        ctx = join_ctx(&ctx, c.ctx())?;
    }
    let linear: [[TowerElem; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].lift_to(&ctx).unwrap()));
    SourceAut::new(linear, std::array::from_fn(|_| TowerElem::zero(&ctx)))
        .map_err(|_| PencilError::Internal("singular basis".into()))
}

/// Source change by a matrix of functional rows: the new i-th coordinate is
/// the functional rows[i]; the substituted automorphism is the inverse.
fn source_from_rows(rows: [[TowerElem; 3]; 3]) -> Result<SourceAut, PencilError> {
    let mut ctx = rows[0][0].ctx().clone();
    for c in rows.iter().flatten() {
        ctx = join_ctx(&ctx, c.ctx())?;
    }
    let m: [[TowerElem; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].lift_to(&ctx).unwrap()));
    let inv = inv3(&m).ok_or_else(|| PencilError::Internal("singular functional frame".into()))?;
    SourceAut::new(inv, std::array::from_fn(|_| TowerElem::zero(&ctx)))
        .map_err(|_| PencilError::Internal("singular frame".into()))
}

fn target_linear(u: [[TowerElem; 2]; 2]) -> Result<TargetAut, PencilError> {
    let mut ctx = u[0][0].ctx().clone();
    for c in u.iter().flatten() {
        ctx = join_ctx(&ctx, c.ctx())?;
    }
    let lifted: [[TowerElem; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| u[i][j].lift_to(&ctx).unwrap()));
    TargetAut::new(lifted, [TowerElem::zero(&ctx), TowerElem::zero(&ctx)])
        .map_err(|_| PencilError::Internal("singular target combination".into()))
}

fn target_diag(a: &TowerElem, d: &TowerElem) -> Result<TargetAut, PencilError> {
    let ctx = join_ctx(a.ctx(), d.ctx())?;
    let z = TowerElem::zero(&ctx);
    target_linear([
        [a.lift_to(&ctx).unwrap(), z.clone()],
        [z, d.lift_to(&ctx).unwrap()],
    ])
}

fn zero3(ctx: &Ctx) -> [TowerElem; 3] {
    std::array::from_fn(|_| TowerElem::zero(ctx))
}

/// Kernel plane of a nonzero functional: two independent vectors.
fn functional_kernel(l: &[TowerElem; 3], ctx: &Ctx) -> [[TowerElem; 3]; 2] {
    let z = TowerElem::zero(ctx);
    let cands = [
        [l[1].clone(), -&l[0], z.clone()],
        [l[2].clone(), z.clone(), -&l[0]],
        [z.clone(), l[2].clone(), -&l[1]],
    ];
    let mut picked: Vec<[TowerElem; 3]> = Vec::new();
    for c in cands {
        if is_zero_vec(&c) {
            continue;
        }
        if picked.is_empty() {
            picked.push(c);
        } else if !is_zero_vec(&cross3(&picked[0], &c)) {
            picked.push(c);
            break;
        }
    }
    assert_eq!(picked.len(), 2, "functional kernel needs a nonzero functional");
    [picked[0].clone(), picked[1].clone()]
}

/// Linear coefficient triple (x, y, z) of a degree-<=1 component.
fn linear_functional(c: &[TowerElem; 10]) -> [TowerElem; 3] {
    [c[6].clone(), c[7].clone(), c[8].clone()]
}

/// Factor a nondegenerate binary quadratic a x^2 + b xy + c y^2 into two
/// independent linear forms with exact product, possibly extending the tower.
fn factor_binary(
    a: &TowerElem,
    b: &TowerElem,
    c: &TowerElem,
) -> Result<([TowerElem; 2], [TowerElem; 2], Ctx), PencilError> {
    let ctx = join_ctx(&join_ctx(a.ctx(), b.ctx())?, c.ctx())?;
    let a = a.lift_to(&ctx).unwrap();
    let b = b.lift_to(&ctx).unwrap();
    let c = c.lift_to(&ctx).unwrap();
    if a.is_zero() {
        let l1 = [TowerElem::zero(&ctx), TowerElem::one(&ctx)];
        let l2 = [b.clone(), c.clone()];
        return Ok((l1, l2, ctx));
    }
    let four = TowerElem::from_int(&ctx, 4);
    let disc = &(&b * &b) - &(&four * &(&a * &c));
    let (s, ctx2) = disc.sqrt()?;
    let a2 = a.lift_to(&ctx2).unwrap();
    let b2 = b.lift_to(&ctx2).unwrap();
    let two_a = &a2 + &a2;
    let t1 = (&(-&b2) + &s).try_div(&two_a)?;
    let t2 = (&(-&b2) - &s).try_div(&two_a)?;
    let l1 = [a2.clone(), -&(&a2 * &t1)];
    let l2 = [TowerElem::one(&ctx2), -&t2];
    Ok((l1, l2, ctx2))
}

/// Source change in the (x, y) plane sending a x^2 + bxy + c y^2 exactly to
/// x^2 + y^2 (fixes z).
fn binary_to_sum_of_squares(
    a: &TowerElem,
    b: &TowerElem,
    c: &TowerElem,
) -> Result<SourceAut, PencilError> {
    let (l1, l2, ctx) = factor_binary(a, b, c)?;
    let half = TowerElem::from_ratio(&ctx, 1, 2);
    let i = TowerElem::i(&ctx);
    let two_i = &i + &i;
    let half_i_inv = two_i.inv()?;
    let xrow = [
        &(&l1[0] + &l2[0]) * &half,
        &(&l1[1] + &l2[1]) * &half,
        TowerElem::zero(&ctx),
    ];
    let yrow = [
        &(&l1[0] - &l2[0]) * &half_i_inv,
        &(&l1[1] - &l2[1]) * &half_i_inv,
        TowerElem::zero(&ctx),
    ];
    let zrow = [TowerElem::zero(&ctx), TowerElem::zero(&ctx), TowerElem::one(&ctx)];
    source_from_rows([xrow, yrow, zrow])
}

/// Write a rank-1 symmetric 3x3 as (1/k) l(x)^2: returns (l, k).
fn rank1_square(m: &[[TowerElem; 3]; 3]) -> Result<([TowerElem; 3], TowerElem), PencilError> {
    for i in 0..3 {
        if !m[i][i].is_zero() {
            return Ok((m[i].clone(), m[i][i].clone()));
        }
    }
    Err(PencilError::Internal("rank-1 form with zero diagonal".into()))
}

/// Does the linear form l divide the quadratic form with matrix m?
fn divides_form(l: &[TowerElem; 3], m: &[[TowerElem; 3]; 3], ctx: &Ctx) -> bool {
    let [k1, k2] = functional_kernel(l, ctx);
    eval_form3(m, &k1).is_zero() && eval_form3(m, &k2).is_zero() && bilin3(m, &k1, &k2).is_zero()
}

/// Exact quotient of a quadratic form by a dividing linear form, as a
/// functional triple.
fn form_div_linear(
    m: &[[TowerElem; 3]; 3],
    l: &[TowerElem; 3],
    ctx: &Ctx,
) -> Result<[TowerElem; 3], PencilError> {
    let ring = ring_xyz();
    let coeffs = sym_to_coeffs(m, ctx);
    let fpoly = Poly::from_terms(
        &ring,
        ctx,
        crate::maps::MONOMIALS.iter().zip(coeffs.iter()).map(|(e, c)| (e.to_vec(), c.clone())),
    );
    let lpoly = {
        let x = Poly::var(&ring, ctx, Var::X).scale(&l[0]);
        let y = Poly::var(&ring, ctx, Var::Y).scale(&l[1]);
        let z = Poly::var(&ring, ctx, Var::Z).scale(&l[2]);
        &(&x + &y) + &z
    };
    let q = fpoly
        .exact_div(&lpoly)
        .ok_or_else(|| PencilError::Internal("expected divisibility".into()))?;
    let coeff = |v: Var| -> TowerElem {
        let mut e = vec![0u32; 3];
        e[q.ring().index_of(v).unwrap()] = 1;
        q.terms()
            .find(|(mm, _)| **mm == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| TowerElem::zero(ctx))
    };
    Ok([coeff(Var::X), coeff(Var::Y), coeff(Var::Z)])
}

fn lift3(v: &[TowerElem; 3], ctx: &Ctx) -> [TowerElem; 3] {
    std::array::from_fn(|i| v[i].lift_to(ctx).unwrap())
}

fn lift_mat3(m: &[[TowerElem; 3]; 3], ctx: &Ctx) -> [[TowerElem; 3]; 3] {
    std::array::from_fn(|i| lift3(&m[i], ctx))
}

/// Complete a partially-zero functional frame to an invertible one with
/// standard basis rows.
fn fix_frame(rows: [[TowerElem; 3]; 3], ctx: &Ctx) -> [[TowerElem; 3]; 3] {
    let mut have: Vec<[TowerElem; 3]> =
        rows.iter().filter(|r| !is_zero_vec(*r)).cloned().collect();
    let std_rows: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for sr in std_rows {
        if have.len() == 3 {
            break;
        }
        let cand: [TowerElem; 3] = std::array::from_fn(|i| TowerElem::from_int(ctx, sr[i]));
        let mut trial: Mat = have.iter().map(|r| r.to_vec()).collect();
        trial.push(cand.to_vec());
        if rank(&trial) == trial.len() {
            have.push(cand);
        }
    }
    [have[0].clone(), have[1].clone(), have[2].clone()]
}

// ---------------------------------------------------------------------------
// classify_top
// ---------------------------------------------------------------------------

/// Decide the linear type of a homogeneous pair, constructing a linear
/// witness to its normal form whenever the field policy allows.
pub fn classify_top(ft: &QuadMap, policy: FieldPolicy) -> Result<TopClassification, PencilError> {
    classify_top_ordered(ft, policy, 0)
}

/// Like [`classify_top`], with an explicit ordering (0..6) of the pencil
/// roots used in the three-distinct-roots witness; the type decision itself
/// is ordering-independent.
pub fn classify_top_ordered(
    ft: &QuadMap,
    policy: FieldPolicy,
    t1_ordering: usize,
) -> Result<TopClassification, PencilError> {
    check_homogeneous(ft)?;
    let mut red = Reducer::new(ft.clone());
    if ft.deg_f() < ft.deg_g() {
        let ctx = &ft.ctx;
        let zero = TowerElem::zero(ctx);
        let one = TowerElem::one(ctx);
        let swap = TargetAut::new(
            [[zero.clone(), one.clone()], [one, zero.clone()]],
            [zero.clone(), zero],
        )
        .unwrap();
        red.step_target(&swap, "swap components");
    }
    let df = red.cur.deg_f();
    let dg = red.cur.deg_g();
    match (df, dg) {
        (2, 2) => classify_22(red, policy, t1_ordering),
        (2, 1) => classify_21(red),
        (2, -1) => classify_2_zero(red),
        (1, 1) => {
            let lf = linear_functional(&red.cur.f);
            let lg = linear_functional(&red.cur.g);
            if is_zero_vec(&cross3(&lf, &lg)) {
                return Err(PencilError::DependentPair);
            }
            let ctx = red.cur.ctx.clone();
            let rows = fix_frame([lf, lg, zero3(&ctx)], &ctx);
            let phi = source_from_rows(rows)?;
            red.step_source(&phi, "linear components onto (x, y)");
            finish(red, TopType::T19, PencilProfile::empty())
        }
        (1, -1) => {
            let lf = linear_functional(&red.cur.f);
            let ctx = red.cur.ctx.clone();
            let rows = fix_frame([lf, zero3(&ctx), zero3(&ctx)], &ctx);
            let phi = source_from_rows(rows)?;
            red.step_source(&phi, "linear component onto x");
            finish(red, TopType::T20, PencilProfile::empty())
        }
        (-1, -1) => finish(red, TopType::T21, PencilProfile::empty()),
        _ => Err(PencilError::DegreeMismatch(df, dg)),
    }
}

fn finish(
    red: Reducer,
    ty: TopType,
    profile: PencilProfile,
) -> Result<TopClassification, PencilError> {
    let canon = ty.canonical(&red.cur.ctx);
    if red.cur != canon {
        return Err(PencilError::Internal(format!(
            "normal form mismatch for {:?}: reached {:?}",
            ty, red.cur
        )));
    }
    Ok(TopClassification { ty, witness: Some(red.chain), profile })
}

fn certificate_only(ty: TopType, profile: PencilProfile) -> TopClassification {
    TopClassification { ty, witness: None, profile }
}

fn is_policy_failure(e: &PencilError) -> bool {
    matches!(
        e,
        PencilError::Field(FieldError::TowerDepthExceeded(_))
            | PencilError::Poly(PolyError::CubicOutsidePolicy)
            | PencilError::Poly(PolyError::Field(FieldError::TowerDepthExceeded(_)))
    )
}

fn wrap_policy(
    res: Result<TopClassification, PencilError>,
    ty: TopType,
    profile: PencilProfile,
) -> Result<TopClassification, PencilError> {
    match res {
        Ok(cls) => Ok(TopClassification { profile, ..cls }),
        Err(e) if is_policy_failure(&e) => Ok(certificate_only(ty, profile)),
        Err(e) => Err(e),
    }
}

// --- both components of degree 2 -------------------------------------------

fn classify_22(
    red: Reducer,
    policy: FieldPolicy,
    t1_ordering: usize,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let mf = sym_matrix(&red.cur.f, &ctx);
    let mg = sym_matrix(&red.cur.g, &ctx);
    let cubic = pencil_cubic_coeffs(&mf, &mg);
    let cubic_poly = pencil_cubic(&red.cur)?;
    if cubic.iter().all(|c| c.is_zero()) {
        return classify_degenerate(red, &mf, &mg, cubic_poly);
    }
    let profile_counts = cubic_root_profile(&cubic, &ctx)?;
    let mut profile = PencilProfile {
        det_cubic: Some(cubic_poly),
        root_profile: profile_counts.clone(),
        ranks_at_roots: Vec::new(),
        degenerate: None,
    };
    let max_mult = profile_counts.iter().map(|&(m, _)| m).max().unwrap();
    if max_mult == 1 {
        let res = witness_t1(red, &mf, &mg, &cubic, policy, t1_ordering);
        return wrap_policy(res, TopType::T1, profile);
    }
    let (root, mult) = cubic_multiple_root(&cubic, &ctx)?
        .ok_or_else(|| PencilError::Internal("multiple root expected".into()))?;
    let member = root.member(&mf, &mg);
    let r = rank(&sym3_to_mat(&member));
    profile.ranks_at_roots.push((mult, r));
    let ty = match (mult, r) {
        (2, 2) => TopType::T2,
        (2, 1) => TopType::T3,
        (3, 2) => TopType::T4,
        (3, 1) => TopType::T5,
        _ => {
            return Err(PencilError::Internal(format!(
                "impossible pencil data: multiplicity {mult}, rank {r}"
            )))
        }
    };
    let res = match ty {
        TopType::T2 => witness_t2(red, &cubic, &root),
        TopType::T3 => witness_t3(red, &cubic, &root),
        TopType::T4 => witness_t4(red, &root),
        TopType::T5 => witness_t5(red, &root),
        _ => unreachable!(),
    };
    wrap_policy(res, ty, profile)
}

/// The simple root accompanying a double root.
fn other_simple_root(
    cubic: &[TowerElem; 4],
    double: &ProjRoot,
    ctx: &Ctx,
) -> Result<ProjRoot, PencilError> {
    let (p, inf_mult) = dehomogenize(cubic);
    if double.mu.is_zero() {
        if udeg(&p) != 1 {
            return Err(PencilError::Internal("expected linear residual".into()));
        }
        return Ok(ProjRoot::finite(-&p[0].try_div(&p[1])?));
    }
    let r = double.lambda.try_div(&double.mu)?;
    let lin = vec![-&r, TowerElem::one(ctx)];
    let sq = crate::poly::umul(&lin, &lin, ctx);
    let (q, rem) = udivmod(&p, &sq, ctx)?;
    if !crate::poly::u_is_zero(&rem) {
        return Err(PencilError::Internal("double root does not divide".into()));
    }
    if udeg(&q) == 0 {
        if inf_mult == 1 {
            return Ok(ProjRoot::infinity(ctx));
        }
        return Err(PencilError::Internal("missing simple root".into()));
    }
    Ok(ProjRoot::finite(-&q[0].try_div(&q[1])?))
}

fn kernel_vector(m: &[[TowerElem; 3]; 3]) -> Result<[TowerElem; 3], PencilError> {
    let k = kernel(&sym3_to_mat(m));
    if k.is_empty() {
        return Err(PencilError::Internal("expected singular member".into()));
    }
    Ok([k[0][0].clone(), k[0][1].clone(), k[0][2].clone()])
}

const ORDERINGS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn witness_t1(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    mg: &[[TowerElem; 3]; 3],
    cubic: &[TowerElem; 4],
    policy: FieldPolicy,
    ordering: usize,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let (roots, ctx2) = cubic_all_roots(cubic, &ctx, policy)?;
    if roots.len() != 3 {
        return Err(PencilError::Internal("expected three distinct roots".into()));
    }
    let perm = ORDERINGS[ordering % 6];
    let ordered: [ProjRoot; 3] = std::array::from_fn(|i| roots[perm[i]].0.clone());
    let mf2 = lift_mat3(mf, &ctx2);
    let mg2 = lift_mat3(mg, &ctx2);
    let vs: [[TowerElem; 3]; 3] = [
        kernel_vector(&ordered[0].member(&mf2, &mg2))?,
        kernel_vector(&ordered[1].member(&mf2, &mg2))?,
        kernel_vector(&ordered[2].member(&mf2, &mg2))?,
    ];
    let fv: [TowerElem; 3] = std::array::from_fn(|i| eval_form3(&mf2, &vs[i]));
    let gv: [TowerElem; 3] = std::array::from_fn(|i| eval_form3(&mg2, &vs[i]));
    // target: row 2 kills g' at v1, row 1 kills f' at v2, scaled to agree at v3
    let phi3 = &(&gv[1] * &fv[2]) - &(&fv[1] * &gv[2]);
    let gam3 = &(&gv[0] * &fv[2]) - &(&fv[0] * &gv[2]);
    if phi3.is_zero() || gam3.is_zero() {
        return Err(PencilError::Internal("degenerate root configuration".into()));
    }
    let s = gam3.try_div(&phi3)?;
    let u = [[&gv[1] * &s, -&(&fv[1] * &s)], [gv[0].clone(), -&fv[0]]];
    let psi = target_linear(u)?;
    red.step_target(&psi, "components onto diagonal pencil slots");
    let ctx3 = red.cur.ctx.clone();
    let nf = sym_matrix(&red.cur.f, &ctx3);
    let ng = sym_matrix(&red.cur.g, &ctx3);
    let w = [
        eval_form3(&nf, &lift3(&vs[0], &ctx3)),
        eval_form3(&ng, &lift3(&vs[1], &ctx3)),
        eval_form3(&nf, &lift3(&vs[2], &ctx3)),
    ];
    let mut cols: Vec<[TowerElem; 3]> = Vec::new();
    let mut cur_ctx = ctx3.clone();
    for i in 0..3 {
        let (root, c2) = w[i].lift_to(&cur_ctx).unwrap().sqrt()?;
        cur_ctx = c2;
        let inv = root.inv()?;
        cols.push(std::array::from_fn(|j| {
            &vs[i][j].lift_to(&cur_ctx).unwrap() * &inv.lift_to(&cur_ctx).unwrap()
        }));
    }
    let cols: [[TowerElem; 3]; 3] = std::array::from_fn(|i| lift3(&cols[i], &cur_ctx));
    let phi = source_from_columns(cols)?;
    red.step_source(&phi, "scale pencil kernel directions");
    finish(red, TopType::T1, PencilProfile::empty())
}

fn witness_t2(
    mut red: Reducer,
    cubic: &[TowerElem; 4],
    double: &ProjRoot,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let simple = other_simple_root(cubic, double, &ctx)?;
    let u = [
        [double.lambda.clone(), double.mu.clone()],
        [simple.lambda.clone(), simple.mu.clone()],
    ];
    let psi = target_linear(u)?;
    red.step_target(&psi, "components = singular pencil members");
    let ctx = red.cur.ctx.clone();
    let nf = sym_matrix(&red.cur.f, &ctx);
    let ng = sym_matrix(&red.cur.g, &ctx);
    let u1 = kernel_vector(&ng)?;
    let u2 = kernel_vector(&nf)?;
    let cols = complete_basis3(&ctx, &[u1, u2]);
    let cols_arr: [[TowerElem; 3]; 3] =
        std::array::from_fn(|j| std::array::from_fn(|i| cols[i][j].clone()));
    let phi = source_from_columns(cols_arr)?;
    red.step_source(&phi, "kernel vectors onto coordinate axes");
    let a = red.cur.f[0].clone();
    let b = red.cur.f[2].clone();
    let c = red.cur.f[5].clone();
    let e = red.cur.g[4].clone();
    let h = red.cur.g[5].clone();
    if a.is_zero() || e.is_zero() {
        return Err(PencilError::Internal("unexpected zero coefficient in type-2 form".into()));
    }
    let ctx = red.cur.ctx.clone();
    let one = TowerElem::one(&ctx);
    let zero = TowerElem::zero(&ctx);
    // new y reads e y + h z, turning g into yz
    let rows = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), e.clone(), h.clone()],
        [zero.clone(), zero.clone(), one.clone()],
    ];
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "absorb z^2 into the y coordinate");
    let four = TowerElem::from_int(&ctx, 4);
    let disc = &(&four * &(&a * &c)) - &(&b * &b);
    if disc.is_zero() {
        return Err(PencilError::Internal("degenerate binary part in type-2 form".into()));
    }
    let (sd, ctx2) = disc.sqrt()?;
    let a2 = a.lift_to(&ctx2).unwrap();
    let b2 = b.lift_to(&ctx2).unwrap();
    let two_a = &a2 + &a2;
    let alpha = sd.try_div(&two_a)?;
    let gamma = (-&b2).try_div(&two_a)?;
    let uscale = (&four.lift_to(&ctx2).unwrap() * &a2).try_div(&disc.lift_to(&ctx2).unwrap())?;
    let one = TowerElem::one(&ctx2);
    let zero = TowerElem::zero(&ctx2);
    let phi = SourceAut::new(
        [
            [alpha, zero.clone(), gamma],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), one.clone()],
        ],
        [zero.clone(), zero.clone(), zero.clone()],
    )
    .map_err(|_| PencilError::Internal("singular scaling".into()))?;
    red.step_source(&phi, "diagonalize the (x, z) part");
    let psi = target_diag(&uscale, &one)?;
    red.step_target(&psi, "normalize the leading coefficient");
    finish(red, TopType::T2, PencilProfile::empty())
}

fn witness_t3(
    mut red: Reducer,
    cubic: &[TowerElem; 4],
    double: &ProjRoot,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let simple = other_simple_root(cubic, double, &ctx)?;
    let u = [
        [simple.lambda.clone(), simple.mu.clone()],
        [double.lambda.clone(), double.mu.clone()],
    ];
    let psi = target_linear(u)?;
    red.step_target(&psi, "components = singular pencil members");
    let ctx = red.cur.ctx.clone();
    let nf = sym_matrix(&red.cur.f, &ctx);
    let ng = sym_matrix(&red.cur.g, &ctx);
    let (l, _k) = rank1_square(&ng)?;
    let vf = kernel_vector(&nf)?;
    let [k1, k2] = functional_kernel(&l, &ctx);
    let phi = source_from_columns([k1, k2, vf])?;
    red.step_source(&phi, "kernel plane and vertex onto coordinate slots");
    let cprime = red.cur.g[5].clone();
    if cprime.is_zero() {
        return Err(PencilError::Internal("vertex on the double line".into()));
    }
    let one = TowerElem::one(&ctx);
    let psi = target_diag(&one, &cprime.inv()?)?;
    red.step_target(&psi, "scale the square component");
    let a = red.cur.f[0].clone();
    let b = red.cur.f[1].clone();
    let c = red.cur.f[3].clone();
    let phi = binary_to_sum_of_squares(&a, &b, &c)?;
    red.step_source(&phi, "binary part to x^2 + y^2");
    finish(red, TopType::T3, PencilProfile::empty())
}

fn witness_t4(mut red: Reducer, triple: &ProjRoot) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let (fl, fm) = if triple.mu.is_zero() {
        (TowerElem::zero(&ctx), TowerElem::one(&ctx))
    } else {
        (TowerElem::one(&ctx), TowerElem::zero(&ctx))
    };
    let u = [[fl, fm], [triple.lambda.clone(), triple.mu.clone()]];
    let psi = target_linear(u)?;
    red.step_target(&psi, "nonsingular member first, triple member second");
    let ctx = red.cur.ctx.clone();
    let nf = sym_matrix(&red.cur.f, &ctx);
    let ng = sym_matrix(&red.cur.g, &ctx);
    let nf_inv =
        inv3(&nf).ok_or_else(|| PencilError::Internal("member not invertible".into()))?;
    let w = matmul3(&nf_inv, &ng);
    let mut cyc: Option<[TowerElem; 3]> = None;
    for i in 0..3 {
        let e: [TowerElem; 3] =
            std::array::from_fn(|j| TowerElem::from_int(&ctx, if i == j { 1 } else { 0 }));
        let w2 = matvec3(&w, &matvec3(&w, &e));
        if !is_zero_vec(&w2) {
            cyc = Some(e);
            break;
        }
    }
    let v = cyc
        .ok_or_else(|| PencilError::Internal("pencil member not nilpotent of index 3".into()))?;
    let wv = matvec3(&w, &v);
    let w2v = matvec3(&w, &wv);
    let h2 = bilin3(&nf, &v, &w2v);
    let h1 = bilin3(&nf, &v, &wv);
    let h0 = eval_form3(&nf, &v);
    if h2.is_zero() {
        return Err(PencilError::Internal("vanishing Hankel pivot".into()));
    }
    let two = TowerElem::from_int(&ctx, 2);
    let a = (-&h1).try_div(&(&two * &h2))?;
    let b = (-&(&(&h0 + &(&(&two * &a) * &h1)) + &(&(&a * &a) * &h2))).try_div(&(&two * &h2))?;
    let vp: [TowerElem; 3] = std::array::from_fn(|i| &(&v[i] + &(&a * &wv[i])) + &(&b * &w2v[i]));
    let wvp: [TowerElem; 3] = std::array::from_fn(|i| &wv[i] + &(&a * &w2v[i]));
    let phi = source_from_columns([vp, wvp, w2v])?;
    red.step_source(&phi, "Jordan chain basis for the nilpotent pencil");
    // now f = h2 (y^2 + 2xz), g = 2 h2 xy
    let h2_inv = h2.inv()?;
    let half = TowerElem::from_ratio(&ctx, 1, 2);
    let psi = target_diag(&h2_inv, &(&h2_inv * &half))?;
    red.step_target(&psi, "scale to the canonical pencil pair");
    // fixed bridge: (1, q/2) ∘ T4 ∘ P0 = (y^2 + 2xz, xy)
    let q = |n: i64, d: i64| TowerElem::from_ratio(&ctx, n, d);
    let p0 = source_from_columns([
        [q(-1, 2), q(1, 1), q(-1, 8)],
        [q(1, 1), q(0, 1), q(1, 2)],
        [q(0, 1), q(0, 1), q(1, 1)],
    ])?;
    let half_t = target_diag(&TowerElem::one(&ctx), &half)?;
    red.step(&p0.inverse(), &half_t.inverse(), "bridge to the printed normal form");
    finish(red, TopType::T4, PencilProfile::empty())
}

fn witness_t5(mut red: Reducer, triple: &ProjRoot) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let (fl, fm) = if triple.mu.is_zero() {
        (TowerElem::zero(&ctx), TowerElem::one(&ctx))
    } else {
        (TowerElem::one(&ctx), TowerElem::zero(&ctx))
    };
    let u = [[fl, fm], [triple.lambda.clone(), triple.mu.clone()]];
    let psi = target_linear(u)?;
    red.step_target(&psi, "nonsingular member first, rank-1 member second");
    let ctx = red.cur.ctx.clone();
    let nf = sym_matrix(&red.cur.f, &ctx);
    let ng = sym_matrix(&red.cur.g, &ctx);
    let (l, k) = rank1_square(&ng)?;
    // the member is (1/k) l^2: clear the denominator so it becomes l^2
    let one = TowerElem::one(&ctx);
    let psi = target_diag(&one, &k)?;
    red.step_target(&psi, "normalize the square member");
    let [p1, p2] = functional_kernel(&l, &ctx);
    let h11 = eval_form3(&nf, &p1);
    let h12 = bilin3(&nf, &p1, &p2);
    let h22 = eval_form3(&nf, &p2);
    let (w1_0, h_lead, other, h_cross) = if !h11.is_zero() {
        (p1.clone(), h11.clone(), p2.clone(), h12.clone())
    } else if !h22.is_zero() {
        (p2.clone(), h22.clone(), p1.clone(), h12.clone())
    } else {
        return Err(PencilError::Internal("restriction vanished".into()));
    };
    let (sq, ctx2) = h_lead.sqrt()?;
    let sq_inv = sq.inv()?;
    let w1: [TowerElem; 3] = std::array::from_fn(|i| &w1_0[i].lift_to(&ctx2).unwrap() * &sq_inv);
    let ratio = h_cross.lift_to(&ctx2).unwrap().try_div(&h_lead.lift_to(&ctx2).unwrap())?;
    let w2: [TowerElem; 3] = std::array::from_fn(|i| {
        &other[i].lift_to(&ctx2).unwrap() - &(&ratio * &w1_0[i].lift_to(&ctx2).unwrap())
    });
    let l2v = lift3(&l, &ctx2);
    let nf2 = lift_mat3(&nf, &ctx2);
    let j = (0..3)
        .find(|&j| !l2v[j].is_zero())
        .ok_or_else(|| PencilError::Internal("zero functional".into()))?;
    let mut u3: [TowerElem; 3] = std::array::from_fn(|i| {
        if i == j {
            l2v[j].inv().unwrap()
        } else {
            TowerElem::zero(&ctx2)
        }
    });
    let s = bilin3(&nf2, &w1, &u3);
    u3 = std::array::from_fn(|i| &u3[i] - &(&s * &w1[i]));
    let t = bilin3(&nf2, &w2, &u3);
    if t.is_zero() {
        return Err(PencilError::Internal("degenerate cross pairing".into()));
    }
    let r = eval_form3(&nf2, &u3);
    let two = TowerElem::from_int(&ctx2, 2);
    let coef = r.try_div(&(&two * &t))?;
    u3 = std::array::from_fn(|i| &u3[i] - &(&coef * &w2[i]));
    let t_inv = t.inv()?;
    let w2s: [TowerElem; 3] = std::array::from_fn(|i| &w2[i] * &t_inv);
    let phi = source_from_columns([w1, w2s, u3])?;
    red.step_source(&phi, "normal basis for the cone pair");
    finish(red, TopType::T5, PencilProfile::empty())
}

// --- degenerate pencils (determinant identically zero) ----------------------

fn classify_degenerate(
    red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    mg: &[[TowerElem; 3]; 3],
    cubic_poly: Poly,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let rank_f = rank(&sym3_to_mat(mf));
    let rank_g = rank(&sym3_to_mat(mg));
    if rank_f == 0 || rank_g == 0 {
        return Err(PencilError::DependentPair);
    }
    let mut profile = PencilProfile {
        det_cubic: Some(cubic_poly),
        root_profile: Vec::new(),
        ranks_at_roots: Vec::new(),
        degenerate: None,
    };
    if rank_f == 1 || rank_g == 1 {
        let (m_sq, m_other) = if rank_f == 1 { (mf, mg) } else { (mg, mf) };
        let (l, _) = rank1_square(m_sq)?;
        if divides_form(&l, m_other, &ctx) {
            profile.degenerate = Some(DegenerateData::CommonFactor);
            let res = witness_t8(red, mf, mg, &l);
            return wrap_policy(res, TopType::T8, profile);
        }
        profile.degenerate = Some(DegenerateData::CommonKernel);
        let res = witness_t6(red, mf, mg);
        return wrap_policy(res, TopType::T6, profile);
    }
    let v = kernel_vector(mf)?;
    let w = kernel_vector(mg)?;
    if !is_zero_vec(&cross3(&v, &w)) {
        let l = cross3(&v, &w);
        if !(divides_form(&l, mf, &ctx) && divides_form(&l, mg, &ctx)) {
            return Err(PencilError::Internal(
                "vanishing pencil determinant without common structure".into(),
            ));
        }
        profile.degenerate = Some(DegenerateData::CommonFactor);
        let res = witness_t7(red, mf, mg, &l);
        return wrap_policy(res, TopType::T7, profile);
    }
    // shared vertex: look for a common factor among the plane restrictions
    let cols = complete_basis3(&ctx, &[v.clone()]);
    let b1: [TowerElem; 3] = std::array::from_fn(|i| cols[i][1].clone());
    let b2: [TowerElem; 3] = std::array::from_fn(|i| cols[i][2].clone());
    let basis = [b1, b2, v];
    let fbin = restrict_binary(mf, &basis);
    let gbin = restrict_binary(mg, &basis);
    if let Some(lbin) = binary_common_factor(&fbin, &gbin, &ctx)? {
        let binv = inv3(&[
            [basis[0][0].clone(), basis[1][0].clone(), basis[2][0].clone()],
            [basis[0][1].clone(), basis[1][1].clone(), basis[2][1].clone()],
            [basis[0][2].clone(), basis[1][2].clone(), basis[2][2].clone()],
        ])
        .ok_or_else(|| PencilError::Internal("basis not invertible".into()))?;
        // functional rows of the inverse give the dual coordinates
        let l3: [TowerElem; 3] =
            std::array::from_fn(|i| &(&lbin[0] * &binv[0][i]) + &(&lbin[1] * &binv[1][i]));
        profile.degenerate = Some(DegenerateData::CommonFactor);
        let res = witness_t8(red, mf, mg, &l3);
        return wrap_policy(res, TopType::T8, profile);
    }
    profile.degenerate = Some(DegenerateData::CommonKernel);
    let res = witness_t6(red, mf, mg);
    wrap_policy(res, TopType::T6, profile)
}

/// Gram data (a, b, c) with form = a x^2 + b xy + c y^2 on the plane of the
/// first two basis vectors.
fn restrict_binary(m: &[[TowerElem; 3]; 3], basis: &[[TowerElem; 3]; 3]) -> [TowerElem; 3] {
    let a = eval_form3(m, &basis[0]);
    let b = bilin3(m, &basis[0], &basis[1]);
    let c = eval_form3(m, &basis[1]);
    [a, &b + &b, c]
}

/// Common linear factor of two binary quadratics, or None.
fn binary_common_factor(
    f: &[TowerElem; 3],
    g: &[TowerElem; 3],
    ctx: &Ctx,
) -> Result<Option<[TowerElem; 2]>, PencilError> {
    let mut fx = vec![f[2].clone(), f[1].clone(), f[0].clone()]; // coeffs in t = x/y
    let mut gx = vec![g[2].clone(), g[1].clone(), g[0].clone()];
    utrim(&mut fx);
    utrim(&mut gx);
    let ydeg_f = 2 - udeg(&fx) as u32;
    let ydeg_g = 2 - udeg(&gx) as u32;
    if ydeg_f >= 1 && ydeg_g >= 1 {
        return Ok(Some([TowerElem::zero(ctx), TowerElem::one(ctx)]));
    }
    let d = ugcd(&fx, &gx, ctx);
    match udeg(&d) {
        0 => Ok(None),
        1 => Ok(Some([TowerElem::one(ctx), d[0].clone()])),
        _ => Err(PencilError::DependentPair),
    }
}

fn witness_t7(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    mg: &[[TowerElem; 3]; 3],
    l: &[TowerElem; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let l1 = form_div_linear(mf, l, &ctx)?;
    let l2 = form_div_linear(mg, l, &ctx)?;
    let phi = source_from_rows([l1, l.clone(), l2])?;
    red.step_source(&phi, "common line and cofactors onto coordinates");
    finish(red, TopType::T7, PencilProfile::empty())
}

fn witness_t8(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    mg: &[[TowerElem; 3]; 3],
    l: &[TowerElem; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let l1 = form_div_linear(mf, l, &ctx)?;
    let l2 = form_div_linear(mg, l, &ctx)?;
    // solve l = a l1 + b l2
    let mut aug: Mat = vec![
        vec![l1[0].clone(), l2[0].clone(), l[0].clone()],
        vec![l1[1].clone(), l2[1].clone(), l[1].clone()],
        vec![l1[2].clone(), l2[2].clone(), l[2].clone()],
    ];
    let (rr, rk, pivots) = crate::linalg::rref(&aug);
    if rk != 2 || pivots.contains(&2) {
        return Err(PencilError::Internal("cofactors do not span the common factor".into()));
    }
    let mut a = TowerElem::zero(&ctx);
    let mut b = TowerElem::zero(&ctx);
    for (ri, &pc) in pivots.iter().enumerate() {
        if pc == 0 {
            a = rr[ri][2].clone();
        } else if pc == 1 {
            b = rr[ri][2].clone();
        }
    }
    aug.clear();
    // second target row independent of (a, b)
    let one = TowerElem::one(&ctx);
    let zero = TowerElem::zero(&ctx);
    let (c, d) = if b.is_zero() {
        (zero.clone(), one.clone())
    } else {
        (one.clone(), zero.clone())
    };
    let u = [[a.clone(), b.clone()], [c.clone(), d.clone()]];
    let psi = target_linear(u)?;
    red.step_target(&psi, "double-line member first");
    let m: [TowerElem; 3] = std::array::from_fn(|i| &(&c * &l1[i]) + &(&d * &l2[i]));
    let rows = fix_frame([m, l.clone(), zero3(&ctx)], &ctx);
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "double line onto y, cofactor onto x");
    let swap = target_linear([[zero.clone(), one.clone()], [one, zero]])?;
    red.step_target(&swap, "swap to (xy, y^2)");
    let _ = (mf, mg);
    finish(red, TopType::T8, PencilProfile::empty())
}

fn witness_t6(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    mg: &[[TowerElem; 3]; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let mut stacked: Mat = Vec::new();
    for r in mf.iter().chain(mg.iter()) {
        stacked.push(r.to_vec());
    }
    let kn = kernel(&stacked);
    let v: [TowerElem; 3] = match kn.first() {
        Some(k) => [k[0].clone(), k[1].clone(), k[2].clone()],
        None => {
            return Err(PencilError::Internal(
                "degenerate pencil without common kernel or factor".into(),
            ))
        }
    };
    let cols = complete_basis3(&ctx, &[v.clone()]);
    let b1: [TowerElem; 3] = std::array::from_fn(|i| cols[i][1].clone());
    let b2: [TowerElem; 3] = std::array::from_fn(|i| cols[i][2].clone());
    let phi = source_from_columns([b1, b2, v])?;
    red.step_source(&phi, "common singular point onto the z axis");
    // binary pencil in (x, y)
    let af = [red.cur.f[0].clone(), red.cur.f[1].clone(), red.cur.f[3].clone()];
    let ag = [red.cur.g[0].clone(), red.cur.g[1].clone(), red.cur.g[3].clone()];
    let quarter = TowerElem::from_ratio(&ctx, 1, 4);
    let det_of = |m: &[TowerElem; 3]| -> TowerElem {
        &(&m[0] * &m[2]) - &(&(&m[1] * &m[1]) * &quarter)
    };
    let half = TowerElem::from_ratio(&ctx, 1, 2);
    let mixed = {
        let a12 = &af[1] * &half;
        let b12 = &ag[1] * &half;
        let two = TowerElem::from_int(&ctx, 2);
        &(&(&af[0] * &ag[2]) + &(&af[2] * &ag[0])) - &(&two * &(&a12 * &b12))
    };
    let da = det_of(&af);
    let db = det_of(&ag);
    let mut roots: Vec<ProjRoot> = Vec::new();
    let mut ctx2 = ctx.clone();
    let mut quad = vec![db.clone(), mixed.clone(), da.clone()];
    utrim(&mut quad);
    if udeg(&quad) >= 1 {
        let (rs, c2) =
            uroots_in_tower(&quad, &ctx, FieldPolicy::default()).map_err(PencilError::Poly)?;
        ctx2 = c2;
        for (r, m) in rs {
            if m != 1 {
                return Err(PencilError::Internal(
                    "binary pencil double root without common factor".into(),
                ));
            }
            roots.push(ProjRoot::finite(r));
        }
    }
    if da.is_zero() {
        roots.push(ProjRoot::infinity(&ctx2));
    }
    if roots.len() != 2 {
        return Err(PencilError::Internal(
            "binary pencil must have two singular members".into(),
        ));
    }
    let af2: [TowerElem; 3] = std::array::from_fn(|i| af[i].lift_to(&ctx2).unwrap());
    let ag2: [TowerElem; 3] = std::array::from_fn(|i| ag[i].lift_to(&ctx2).unwrap());
    let member2 = |r: &ProjRoot| -> [TowerElem; 3] {
        std::array::from_fn(|i| &(&r.lambda * &af2[i]) + &(&r.mu * &ag2[i]))
    };
    let m1 = member2(&roots[0]);
    let m2 = member2(&roots[1]);
    let half2 = TowerElem::from_ratio(&ctx2, 1, 2);
    let square_of = |m: &[TowerElem; 3]| -> Result<([TowerElem; 2], TowerElem), PencilError> {
        if !m[0].is_zero() {
            Ok(([m[0].clone(), &m[1] * &half2], m[0].clone()))
        } else if !m[2].is_zero() {
            Ok(([&m[1] * &half2, m[2].clone()], m[2].clone()))
        } else {
            Err(PencilError::Internal("zero singular member".into()))
        }
    };
    let (l1, k1) = square_of(&m1)?;
    let (l2, k2) = square_of(&m2)?;
    let u = [
        [roots[0].lambda.clone(), roots[0].mu.clone()],
        [roots[1].lambda.clone(), roots[1].mu.clone()],
    ];
    let psi = target_linear(u)?;
    red.step_target(&psi, "components = singular binary members");
    let zero = TowerElem::zero(&ctx2);
    let one = TowerElem::one(&ctx2);
    let rows = [
        [l1[0].clone(), l1[1].clone(), zero.clone()],
        [l2[0].clone(), l2[1].clone(), zero.clone()],
        [zero.clone(), zero.clone(), one],
    ];
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "square factors onto the axes");
    // each member was (1/k) l^2, so clear the denominators
    let psi = target_diag(&k1, &k2)?;
    red.step_target(&psi, "absorb the square denominators");
    finish(red, TopType::T6, PencilProfile::empty())
}

// --- (2, 1) and (2, 0) ------------------------------------------------------

fn classify_21(red: Reducer) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let mf = sym_matrix(&red.cur.f, &ctx);
    let lg = linear_functional(&red.cur.g);
    let rank_f = rank(&sym3_to_mat(&mf));
    let profile = PencilProfile::empty();
    match rank_f {
        3 => {
            let [k1, k2] = functional_kernel(&lg, &ctx);
            let b = bilin3(&mf, &k1, &k2);
            let h = [eval_form3(&mf, &k1), &b + &b, eval_form3(&mf, &k2)];
            let quarter = TowerElem::from_ratio(&ctx, 1, 4);
            let disc = &(&h[0] * &h[2]) - &(&(&h[1] * &h[1]) * &quarter);
            if !disc.is_zero() {
                let res = witness_t9(red, &lg, &[k1, k2]);
                wrap_policy(res, TopType::T9, profile)
            } else {
                let res = witness_t10(red, &lg, &[k1, k2], &h);
                wrap_policy(res, TopType::T10, profile)
            }
        }
        2 => {
            let v = kernel_vector(&mf)?;
            let gv = &(&(&lg[0] * &v[0]) + &(&lg[1] * &v[1])) + &(&lg[2] * &v[2]);
            if !gv.is_zero() {
                let res = witness_t12(red, &lg, &v, &gv);
                wrap_policy(res, TopType::T12, profile)
            } else if divides_form(&lg, &mf, &ctx) {
                let res = witness_t14(red, &mf, &lg);
                wrap_policy(res, TopType::T14, profile)
            } else {
                let res = witness_t13(red, &lg, &v);
                wrap_policy(res, TopType::T13, profile)
            }
        }
        1 => {
            let (l, k) = rank1_square(&mf)?;
            if is_zero_vec(&cross3(&l, &lg)) {
                let res = witness_t17(red, &lg);
                wrap_policy(res, TopType::T17, profile)
            } else {
                let res = witness_t16(red, &l, &lg, &k);
                wrap_policy(res, TopType::T16, profile)
            }
        }
        _ => Err(PencilError::DependentPair),
    }
}

fn section_of(lg: &[TowerElem; 3], ctx: &Ctx) -> Result<[TowerElem; 3], PencilError> {
    let j = (0..3)
        .find(|&j| !lg[j].is_zero())
        .ok_or_else(|| PencilError::Internal("zero functional".into()))?;
    Ok(std::array::from_fn(|i| {
        if i == j {
            lg[j].inv().unwrap()
        } else {
            TowerElem::zero(ctx)
        }
    }))
}

fn witness_t9(
    mut red: Reducer,
    lg: &[TowerElem; 3],
    kg: &[[TowerElem; 3]; 2],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let u1 = section_of(lg, &ctx)?;
    let phi = source_from_columns([u1, kg[0].clone(), kg[1].clone()])?;
    red.step_source(&phi, "kernel plane of g onto (y, z)");
    let h = [red.cur.f[3].clone(), red.cur.f[4].clone(), red.cur.f[5].clone()];
    let (l1, l2, ctx2) = factor_binary(&h[0], &h[1], &h[2])?;
    let zero = TowerElem::zero(&ctx2);
    let one = TowerElem::one(&ctx2);
    let rows = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), l1[0].clone(), l1[1].clone()],
        [zero.clone(), l2[0].clone(), l2[1].clone()],
    ];
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "factor the residual binary form into yz");
    let m1 = red.cur.f[1].clone();
    let m2 = red.cur.f[2].clone();
    let ctx3 = red.cur.ctx.clone();
    let one = TowerElem::one(&ctx3);
    let zero = TowerElem::zero(&ctx3);
    let phi = SourceAut::new(
        [
            [one.clone(), zero.clone(), zero.clone()],
            [-&m2, one.clone(), zero.clone()],
            [-&m1, zero.clone(), one.clone()],
        ],
        [zero.clone(), zero.clone(), zero.clone()],
    )
    .map_err(|_| PencilError::Internal("shear".into()))?;
    red.step_source(&phi, "absorb the mixed terms");
    let a = red.cur.f[0].clone();
    if a.is_zero() {
        return Err(PencilError::Internal("rank-3 form lost its x^2 term".into()));
    }
    let (s, ctx4) = a.sqrt()?;
    let s_inv = s.inv()?;
    let one = TowerElem::one(&ctx4);
    let zero = TowerElem::zero(&ctx4);
    let phi = SourceAut::new(
        [
            [s_inv, zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), one.clone()],
        ],
        [zero.clone(), zero.clone(), zero.clone()],
    )
    .map_err(|_| PencilError::Internal("scale".into()))?;
    red.step_source(&phi, "normalize the x^2 coefficient");
    let psi = target_diag(&one, &s)?;
    red.step_target(&psi, "rescale the linear component");
    finish(red, TopType::T9, PencilProfile::empty())
}

fn witness_t10(
    mut red: Reducer,
    lg: &[TowerElem; 3],
    kg: &[[TowerElem; 3]; 2],
    h: &[TowerElem; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let half = TowerElem::from_ratio(&ctx, 1, 2);
    let (w1_0, lead, other) = if !h[0].is_zero() {
        (kg[0].clone(), h[0].clone(), kg[1].clone())
    } else if !h[2].is_zero() {
        (kg[1].clone(), h[2].clone(), kg[0].clone())
    } else {
        return Err(PencilError::Internal("degenerate restriction in type 10".into()));
    };
    let cross = &h[1] * &half;
    let (sq, ctx2) = lead.sqrt()?;
    let sq_inv = sq.inv()?;
    let w1: [TowerElem; 3] = std::array::from_fn(|i| &w1_0[i].lift_to(&ctx2).unwrap() * &sq_inv);
    let ratio = cross.lift_to(&ctx2).unwrap().try_div(&lead.lift_to(&ctx2).unwrap())?;
    let w2: [TowerElem; 3] = std::array::from_fn(|i| {
        &other[i].lift_to(&ctx2).unwrap() - &(&ratio * &w1_0[i].lift_to(&ctx2).unwrap())
    });
    let lg2 = lift3(lg, &ctx2);
    let ug = section_of(&lg2, &ctx2)?;
    let phi = source_from_columns([w1, ug, w2])?;
    red.step_source(&phi, "square direction, section of g, radical");
    if !red.cur.f[2].is_zero() || !red.cur.f[5].is_zero() {
        return Err(PencilError::Internal("unexpected terms in type-10 form".into()));
    }
    let m1 = red.cur.f[1].clone();
    let a = red.cur.f[3].clone();
    let m2 = red.cur.f[4].clone();
    if m2.is_zero() {
        return Err(PencilError::Internal("rank-3 form without z term".into()));
    }
    let ctx3 = red.cur.ctx.clone();
    let one = TowerElem::one(&ctx3);
    let zero = TowerElem::zero(&ctx3);
    let rows = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [m1.clone(), a.clone(), m2.clone()],
    ];
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "absorb stray terms into z");
    finish(red, TopType::T10, PencilProfile::empty())
}

fn witness_t12(
    mut red: Reducer,
    lg: &[TowerElem; 3],
    v: &[TowerElem; 3],
    gv: &TowerElem,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let gv_inv = gv.inv()?;
    let u3: [TowerElem; 3] = std::array::from_fn(|i| &v[i] * &gv_inv);
    let [k1, k2] = functional_kernel(lg, &ctx);
    let phi = source_from_columns([k1, k2, u3])?;
    red.step_source(&phi, "kernel plane of g onto (x, y), vertex onto z");
    let a = red.cur.f[0].clone();
    let b = red.cur.f[1].clone();
    let c = red.cur.f[3].clone();
    let phi = binary_to_sum_of_squares(&a, &b, &c)?;
    red.step_source(&phi, "binary part to x^2 + y^2");
    finish(red, TopType::T12, PencilProfile::empty())
}

fn witness_t13(
    mut red: Reducer,
    lg: &[TowerElem; 3],
    v: &[TowerElem; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let [k1, k2] = functional_kernel(lg, &ctx);
    let u2 = if !is_zero_vec(&cross3(&k1, v)) { k1 } else { k2 };
    let u1 = section_of(lg, &ctx)?;
    let phi = source_from_columns([u1, u2, v.clone()])?;
    red.step_source(&phi, "section of g, kernel direction, vertex");
    let b = red.cur.f[1].clone();
    let c = red.cur.f[3].clone();
    if c.is_zero() {
        return Err(PencilError::Internal("type 13 with g dividing f".into()));
    }
    let ctx2 = red.cur.ctx.clone();
    let two_c = &c + &c;
    let shift = b.try_div(&two_c)?;
    let one = TowerElem::one(&ctx2);
    let zero = TowerElem::zero(&ctx2);
    let rows = [
        [one.clone(), zero.clone(), zero.clone()],
        [shift, one.clone(), zero.clone()],
        [zero.clone(), zero.clone(), one.clone()],
    ];
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "complete the square in y");
    let app = red.cur.f[0].clone();
    let cc = red.cur.f[3].clone();
    if app.is_zero() {
        return Err(PencilError::Internal("degenerate completed square".into()));
    }
    let psi = target_diag(&app.inv()?, &one)?;
    red.step_target(&psi, "normalize the x^2 coefficient");
    // f = x^2 + lam y^2: scale y by 1/sqrt(lam)
    let lam = red.cur.f[3].clone();
    let _ = (app, cc);
    let (s, ctx3) = lam.sqrt()?;
    let s_inv = s.inv()?;
    let one = TowerElem::one(&ctx3);
    let zero = TowerElem::zero(&ctx3);
    let phi = SourceAut::new(
        [
            [one.clone(), zero.clone(), zero.clone()],
            [zero.clone(), s_inv, zero.clone()],
            [zero.clone(), zero.clone(), one.clone()],
        ],
        [zero.clone(), zero.clone(), zero.clone()],
    )
    .map_err(|_| PencilError::Internal("scale".into()))?;
    red.step_source(&phi, "normalize the y^2 coefficient");
    finish(red, TopType::T13, PencilProfile::empty())
}

fn witness_t14(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
    lg: &[TowerElem; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let l1 = form_div_linear(mf, lg, &ctx)?;
    let rows = fix_frame([lg.clone(), l1, zero3(&ctx)], &ctx);
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "divisor onto x, cofactor onto y");
    finish(red, TopType::T14, PencilProfile::empty())
}

fn witness_t16(
    mut red: Reducer,
    l: &[TowerElem; 3],
    lg: &[TowerElem; 3],
    k: &TowerElem,
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let rows = fix_frame([l.clone(), lg.clone(), zero3(&ctx)], &ctx);
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "square line onto x, g onto y");
    let one = TowerElem::one(&ctx);
    let psi = target_diag(&k.clone(), &one)?;
    let _ = psi;
    // after the frame change f = (1/k) x^2; clear the denominator
    let c = red.cur.f[0].clone();
    let psi = target_diag(&c.inv()?, &one)?;
    red.step_target(&psi, "normalize f = x^2");
    finish(red, TopType::T16, PencilProfile::empty())
}

fn witness_t17(mut red: Reducer, lg: &[TowerElem; 3]) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let rows = fix_frame([lg.clone(), zero3(&ctx), zero3(&ctx)], &ctx);
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "g onto x");
    let c = red.cur.f[0].clone();
    if c.is_zero() {
        return Err(PencilError::Internal("type 17 scaling".into()));
    }
    let one = TowerElem::one(&ctx);
    let psi = target_diag(&c.inv()?, &one)?;
    red.step_target(&psi, "normalize f = x^2");
    finish(red, TopType::T17, PencilProfile::empty())
}

fn classify_2_zero(red: Reducer) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let mf = sym_matrix(&red.cur.f, &ctx);
    let rank_f = rank(&sym3_to_mat(&mf));
    let profile = PencilProfile::empty();
    match rank_f {
        3 => wrap_policy(witness_t11(red, &mf), TopType::T11, profile),
        2 => wrap_policy(witness_t15(red, &mf), TopType::T15, profile),
        1 => wrap_policy(witness_t18(red, &mf), TopType::T18, profile),
        _ => Err(PencilError::DependentPair),
    }
}

fn witness_t11(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let mut w1: Option<[TowerElem; 3]> = None;
    let std_v: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
    for sv in std_v {
        let v: [TowerElem; 3] = std::array::from_fn(|i| TowerElem::from_int(&ctx, sv[i]));
        if !eval_form3(mf, &v).is_zero() {
            w1 = Some(v);
            break;
        }
    }
    let w1 = w1.ok_or_else(|| PencilError::Internal("no anisotropic vector found".into()))?;
    let c1 = eval_form3(mf, &w1);
    let row: [TowerElem; 3] = std::array::from_fn(|j| {
        let e: [TowerElem; 3] =
            std::array::from_fn(|i| TowerElem::from_int(&ctx, if i == j { 1 } else { 0 }));
        bilin3(mf, &w1, &e)
    });
    let [p1, p2] = functional_kernel(&row, &ctx);
    let phi = source_from_columns([p1, p2, w1])?;
    red.step_source(&phi, "split off an anisotropic direction");
    let a = red.cur.f[0].clone();
    let b = red.cur.f[1].clone();
    let c = red.cur.f[3].clone();
    let phi = binary_to_sum_of_squares(&a, &b, &c)?;
    red.step_source(&phi, "binary part to x^2 + y^2");
    let c1 = red.cur.f[5].clone(); // re-read in the current tower
    let (s, ctx2) = c1.sqrt()?;
    let s_inv = s.inv()?;
    let one = TowerElem::one(&ctx2);
    let zero = TowerElem::zero(&ctx2);
    let phi = SourceAut::new(
        [
            [one.clone(), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), s_inv],
        ],
        [zero.clone(), zero.clone(), zero.clone()],
    )
    .map_err(|_| PencilError::Internal("scale".into()))?;
    red.step_source(&phi, "normalize the z^2 coefficient");
    finish(red, TopType::T11, PencilProfile::empty())
}

fn witness_t15(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let v = kernel_vector(mf)?;
    let cols = complete_basis3(&ctx, &[v.clone()]);
    let b1: [TowerElem; 3] = std::array::from_fn(|i| cols[i][1].clone());
    let b2: [TowerElem; 3] = std::array::from_fn(|i| cols[i][2].clone());
    let phi = source_from_columns([b1, b2, v])?;
    red.step_source(&phi, "radical onto the z axis");
    let a = red.cur.f[0].clone();
    let b = red.cur.f[1].clone();
    let c = red.cur.f[3].clone();
    let phi = binary_to_sum_of_squares(&a, &b, &c)?;
    red.step_source(&phi, "binary part to x^2 + y^2");
    finish(red, TopType::T15, PencilProfile::empty())
}

fn witness_t18(
    mut red: Reducer,
    mf: &[[TowerElem; 3]; 3],
) -> Result<TopClassification, PencilError> {
    let ctx = red.cur.ctx.clone();
    let (l, _k) = rank1_square(mf)?;
    let rows = fix_frame([l, zero3(&ctx), zero3(&ctx)], &ctx);
    let phi = source_from_rows(rows)?;
    red.step_source(&phi, "square line onto x");
    let c = red.cur.f[0].clone();
    let one = TowerElem::one(&ctx);
    let psi = target_diag(&c.inv()?, &one)?;
    red.step_target(&psi, "normalize f = x^2");
    finish(red, TopType::T18, PencilProfile::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;
    use crate::maps::verify_witness;

    fn ctx() -> Ctx {
        Tower::base()
    }

    #[test]
    fn pencil_cubic_examples() {
        let c = ctx();
        let t1 = TopType::T1.canonical(&c);
        let cubic = pencil_cubic(&t1).unwrap();
        let ring = cubic.ring().clone();
        let l = Poly::var(&ring, &c, Var::Lambda);
        let m = Poly::var(&ring, &c, Var::Mu);
        let expect = &(&l * &m) * &(&l + &m);
        assert_eq!(cubic, expect);
        let t5 = TopType::T5.canonical(&c);
        let cubic = pencil_cubic(&t5).unwrap();
        assert_eq!(cubic, (&l * &(&l * &l)).neg());
        let t6 = TopType::T6.canonical(&c);
        assert!(pencil_cubic(&t6).unwrap().is_zero());
        let t4 = TopType::T4.canonical(&c);
        let cubic = pencil_cubic(&t4).unwrap();
        assert_eq!(cubic, (&l * &(&l * &l)).neg());
    }

    #[test]
    fn canonical_forms_classify_to_themselves() {
        let c = ctx();
        for ty in ALL_TOP_TYPES {
            let m = ty.canonical(&c);
            let cls = classify_top(&m, FieldPolicy::default())
                .unwrap_or_else(|e| panic!("{:?}: {e}", ty));
            assert_eq!(cls.ty, ty, "type mismatch for {:?}", ty);
            let w = cls.witness.unwrap_or_else(|| panic!("{:?}: no witness", ty));
            let canon = ty.canonical(&c);
            verify_witness(&m, &canon, &w).unwrap_or_else(|d| panic!("{:?}: witness fails {:?}", ty, d));
        }
    }

    #[test]
    fn double_root_rank_distinguishes_t2_t3() {
        let c = ctx();
        let t2 = classify_top(&TopType::T2.canonical(&c), FieldPolicy::default()).unwrap();
        assert_eq!(t2.ty, TopType::T2);
        assert_eq!(t2.profile.ranks_at_roots, vec![(2, 2)]);
        let t3 = classify_top(&TopType::T3.canonical(&c), FieldPolicy::default()).unwrap();
        assert_eq!(t3.ty, TopType::T3);
        assert_eq!(t3.profile.ranks_at_roots, vec![(2, 1)]);
    }

    #[test]
    fn triple_root_rank_distinguishes_t4_t5() {
        let c = ctx();
        let t4 = classify_top(&TopType::T4.canonical(&c), FieldPolicy::default()).unwrap();
        assert_eq!(t4.profile.ranks_at_roots, vec![(3, 2)]);
        let t5 = classify_top(&TopType::T5.canonical(&c), FieldPolicy::default()).unwrap();
        assert_eq!(t5.profile.ranks_at_roots, vec![(3, 1)]);
    }

    #[test]
    fn conjugation_invariance_smoke() {
        use crate::maps::{conjugate, source_map, target_map};
        let c = ctx();
        let phi = source_map(&c, |x, y, z, _| [&(x + y) - z, y + &(z + z), &(x - y) + z]);
        // mixing the components is only degree-compatible for equal-degree
        // pairs; otherwise stay diagonal or swap
        let psi_mix = target_map(&c, |p, q, _| [&(p + q) + q, p - q]);
        let psi_diag = target_map(&c, |p, q, _| [&(p + p) + p, q + q]);
        for ty in ALL_TOP_TYPES {
            let m = ty.canonical(&c);
            let equal_deg = m.deg_f() == m.deg_g();
            let psi = if equal_deg { &psi_mix } else { &psi_diag };
            let conj = conjugate(&m, &phi, psi);
            let cls = classify_top(&conj, FieldPolicy::default())
                .unwrap_or_else(|e| panic!("{:?}: {e}", ty));
            assert_eq!(cls.ty, ty, "type changed under conjugation for {:?}", ty);
            let w = cls.witness.unwrap_or_else(|| panic!("no witness for {:?}", ty));
            let canon = ty.canonical(&c);
            assert!(verify_witness(&conj, &canon, &w).is_ok(), "witness fails for {:?}", ty);
        }
    }
}
