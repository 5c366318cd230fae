//! Quadratic maps C^3 -> C^2, affine automorphisms of source and target,
//! exact conjugation, Jacobian minors, and witness chains.

use crate::field::{Ctx, FieldError, TowerElem};
use crate::poly::{join_ctx, ring_xyz, Poly, PolyError, Ring, RingRef, Var};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("matrix is singular")]
    Singular,
    #[error("component degree exceeds 2")]
    DegreeTooHigh,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Monomial basis shared by both components:
/// x^2, xy, xz, y^2, yz, z^2, x, y, z, 1.
pub const MONOMIALS: [[u32; 3]; 10] = [
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 0, 0],
];

/// A pair (f, g) of polynomials of degree <= 2 in x, y, z, stored as two
/// length-10 coefficient vectors in the monomial order above.
#[derive(Clone, PartialEq)]
pub struct QuadMap {
    pub ctx: Ctx,
    pub f: [TowerElem; 10],
    pub g: [TowerElem; 10],
}

impl QuadMap {
    pub fn new(ctx: &Ctx, f: [TowerElem; 10], g: [TowerElem; 10]) -> QuadMap {
        let mut ctx = ctx.clone();
        for c in f.iter().chain(g.iter()) {
            ctx = join_ctx(&ctx, c.ctx()).expect("incompatible towers in map");
        }
        let lift = |v: [TowerElem; 10]| v.map(|c| c.lift_to(&ctx).unwrap());
        QuadMap { f: lift(f), g: lift(g), ctx }
    }

    pub fn zero(ctx: &Ctx) -> QuadMap {
        let z = || std::array::from_fn(|_| TowerElem::zero(ctx));
        QuadMap { ctx: ctx.clone(), f: z(), g: z() }
    }

    /// Build from small integer coefficient vectors (test/representative
    /// convenience).
    pub fn from_ints(ctx: &Ctx, f: [i64; 10], g: [i64; 10]) -> QuadMap {
        QuadMap {
            ctx: ctx.clone(),
            f: f.map(|k| TowerElem::from_int(ctx, k)),
            g: g.map(|k| TowerElem::from_int(ctx, k)),
        }
    }

    pub fn from_polys(f: &Poly, g: &Poly) -> Result<QuadMap, MapError> {
        let ctx = join_ctx(f.ctx(), g.ctx())?;
        let extract = |p: &Poly| -> Result<[TowerElem; 10], MapError> {
            let mut out = std::array::from_fn(|_| TowerElem::zero(&ctx));
            for (e, c) in p.terms() {
                let key = [e[0], e[1], e[2]];
                match MONOMIALS.iter().position(|m| *m == key) {
                    Some(i) => out[i] = c.lift_to(&ctx).unwrap(),
                    None => return Err(MapError::DegreeTooHigh),
                }
            }
            Ok(out)
        };
        let fx = f.lift_ctx(&ctx);
        let gx = g.lift_ctx(&ctx);
        Ok(QuadMap { f: extract(&fx)?, g: extract(&gx)?, ctx })
    }

    pub fn component_polys(&self) -> (Poly, Poly) {
        let ring = ring_xyz();
        let build = |c: &[TowerElem; 10]| {
            Poly::from_terms(
                &ring,
                &self.ctx,
                MONOMIALS.iter().zip(c.iter()).map(|(m, k)| (m.to_vec(), k.clone())),
            )
        };
        (build(&self.f), build(&self.g))
    }

    pub fn lift_ctx(&self, ctx: &Ctx) -> QuadMap {
        QuadMap {
            ctx: ctx.clone(),
            f: self.f.clone().map(|c| c.lift_to(ctx).expect("lift")),
            g: self.g.clone().map(|c| c.lift_to(ctx).expect("lift")),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().all(|c| c.is_zero()) && self.g.iter().all(|c| c.is_zero())
    }

    pub fn component_degree(c: &[TowerElem; 10]) -> i32 {
        if c[..6].iter().any(|k| !k.is_zero()) {
            2
        } else if c[6..9].iter().any(|k| !k.is_zero()) {
            1
        } else if !c[9].is_zero() {
            0
        } else {
            -1
        }
    }

    pub fn deg_f(&self) -> i32 {
        Self::component_degree(&self.f)
    }

    pub fn deg_g(&self) -> i32 {
        Self::component_degree(&self.g)
    }

    /// Top homogeneous part of each component.
    pub fn top_part(&self) -> QuadMap {
        let strip = |c: &[TowerElem; 10]| -> [TowerElem; 10] {
            let d = Self::component_degree(c);
            let mut out = std::array::from_fn(|_| TowerElem::zero(&self.ctx));
            for (i, m) in MONOMIALS.iter().enumerate() {
                if m.iter().sum::<u32>() as i32 == d {
                    out[i] = c[i].clone();
                }
            }
            out
        };
        QuadMap { ctx: self.ctx.clone(), f: strip(&self.f), g: strip(&self.g) }
    }

    /// The three 2x2 Jacobian minors m_xy, m_xz, m_yz.
    pub fn minors(&self) -> (Poly, Poly, Poly) {
        let (f, g) = self.component_polys();
        let fx = f.derivative(Var::X);
        let fy = f.derivative(Var::Y);
        let fz = f.derivative(Var::Z);
        let gx = g.derivative(Var::X);
        let gy = g.derivative(Var::Y);
        let gz = g.derivative(Var::Z);
        let m_xy = &(&fx * &gy) - &(&fy * &gx);
        let m_xz = &(&fx * &gz) - &(&fz * &gx);
        let m_yz = &(&fy * &gz) - &(&fz * &gy);
        (m_xy, m_xz, m_yz)
    }
}

impl fmt::Debug for QuadMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.component_polys();
        write!(f, "({}, {})", p, q)
    }
}

// ---------------------------------------------------------------------------
// affine automorphisms
// ---------------------------------------------------------------------------

fn det3(m: &[[TowerElem; 3]; 3]) -> TowerElem {
    let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&t1 - &t2) + &t3
}

/// Invertible affine automorphism of the source C^3: x -> Lx + t.
#[derive(Clone, PartialEq)]
pub struct SourceAut {
    pub linear: [[TowerElem; 3]; 3],
    pub translation: [TowerElem; 3],
}

impl SourceAut {
    pub fn new(linear: [[TowerElem; 3]; 3], translation: [TowerElem; 3]) -> Result<Self, MapError> {
        let a = SourceAut { linear, translation };
        if a.det().is_zero() {
            return Err(MapError::Singular);
        }
        Ok(a)
    }

    pub fn identity(ctx: &Ctx) -> Self {
        let mut linear = std::array::from_fn(|_| std::array::from_fn(|_| TowerElem::zero(ctx)));
        for (i, row) in linear.iter_mut().enumerate() {
            row[i] = TowerElem::one(ctx);
        }
        SourceAut { linear, translation: std::array::from_fn(|_| TowerElem::zero(ctx)) }
    }

    /// Build from three image polynomials of degree <= 1 in (x, y, z).
    pub fn from_polys(imgs: &[Poly; 3]) -> Result<Self, MapError> {
        let mut ctx = imgs[0].ctx().clone();
        for p in imgs.iter() {
            ctx = join_ctx(&ctx, p.ctx())?;
        }
        let coord = |p: &Poly, v: Var| -> TowerElem {
            let mut e = vec![0u32; 3];
            e[p.ring().index_of(v).unwrap()] = 1;
            p.terms()
                .find(|(m, _)| **m == e)
                .map(|(_, c)| c.lift_to(&ctx).unwrap())
                .unwrap_or_else(|| TowerElem::zero(&ctx))
        };
        let cst = |p: &Poly| -> TowerElem {
            p.terms()
                .find(|(m, _)| m.iter().all(|&k| k == 0))
                .map(|(_, c)| c.lift_to(&ctx).unwrap())
                .unwrap_or_else(|| TowerElem::zero(&ctx))
        };
        for p in imgs.iter() {
            if p.total_degree().unwrap_or(0) > 1 {
                return Err(MapError::DegreeTooHigh);
            }
        }
        let linear = [
            [coord(&imgs[0], Var::X), coord(&imgs[0], Var::Y), coord(&imgs[0], Var::Z)],
            [coord(&imgs[1], Var::X), coord(&imgs[1], Var::Y), coord(&imgs[1], Var::Z)],
            [coord(&imgs[2], Var::X), coord(&imgs[2], Var::Y), coord(&imgs[2], Var::Z)],
        ];
        let translation = [cst(&imgs[0]), cst(&imgs[1]), cst(&imgs[2])];
        SourceAut::new(linear, translation)
    }

    pub fn det(&self) -> TowerElem {
        det3(&self.linear)
    }

    pub fn ctx(&self) -> Ctx {
        self.det().ctx().clone()
    }

    pub fn is_linear(&self) -> bool {
        self.translation.iter().all(|c| c.is_zero())
    }

    /// Image polynomials (x', y', z') as degree-1 polys.
    pub fn images(&self, ring: &RingRef) -> [Poly; 3] {
        let ctx = self.ctx();
        std::array::from_fn(|i| {
            let mut p = Poly::constant(ring, self.translation[i].clone());
            for (j, v) in [Var::X, Var::Y, Var::Z].iter().enumerate() {
                p = &p + &Poly::var(ring, &ctx, *v).scale(&self.linear[i][j]);
            }
            p
        })
    }

    /// Composition: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &SourceAut) -> SourceAut {
        let ctx = join_ctx(&self.ctx(), &other.ctx()).expect("towers");
        let a = |i: usize, j: usize| self.linear[i][j].lift_to(&ctx).unwrap();
        let b = |i: usize, j: usize| other.linear[i][j].lift_to(&ctx).unwrap();
        let linear = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = TowerElem::zero(&ctx);
                for k in 0..3 {
                    s = &s + &(&a(i, k) * &b(k, j));
                }
                s
            })
        });
        let translation = std::array::from_fn(|i| {
            let mut s = self.translation[i].lift_to(&ctx).unwrap();
            for k in 0..3 {
                s = &s + &(&a(i, k) * &other.translation[k].lift_to(&ctx).unwrap());
            }
            s
        });
        SourceAut { linear, translation }
    }

    pub fn inverse(&self) -> SourceAut {
        let ctx = self.ctx();
        let d = self.det();
        let di = d.inv().expect("invertible");
        let m = &self.linear;
        let cof = |i: usize, j: usize| -> TowerElem {
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let minor = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]])
                - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
            if (i + j) % 2 == 0 {
                minor
            } else {
                -&minor
            }
        };
        // inverse linear = adj^T / det
        let linear: [[TowerElem; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| &cof(j, i).lift_to(&ctx).unwrap() * &di)
        });
        // translation: -L^{-1} t
        let translation = std::array::from_fn(|i| {
            let mut s = TowerElem::zero(&ctx);
            for k in 0..3 {
                s = &s + &(&linear[i][k] * &self.translation[k]);
            }
            -&s
        });
        SourceAut { linear, translation }
    }
}

impl fmt::Debug for SourceAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs = self.images(&ring_xyz());
        write!(f, "({}, {}, {})", imgs[0], imgs[1], imgs[2])
    }
}

/// Invertible affine automorphism of the target C^2: p -> Lp + t.
#[derive(Clone, PartialEq)]
pub struct TargetAut {
    pub linear: [[TowerElem; 2]; 2],
    pub translation: [TowerElem; 2],
}

impl TargetAut {
    pub fn new(linear: [[TowerElem; 2]; 2], translation: [TowerElem; 2]) -> Result<Self, MapError> {
        let a = TargetAut { linear, translation };
        if a.det().is_zero() {
            return Err(MapError::Singular);
        }
        Ok(a)
    }

    pub fn identity(ctx: &Ctx) -> Self {
        let one = TowerElem::one(ctx);
        let zero = TowerElem::zero(ctx);
        TargetAut {
            linear: [[one.clone(), zero.clone()], [zero.clone(), one]],
            translation: [zero.clone(), zero],
        }
    }

    /// Build from two image polynomials of degree <= 1 in (p, q).
    pub fn from_polys(imgs: &[Poly; 2]) -> Result<Self, MapError> {
        let mut ctx = imgs[0].ctx().clone();
        ctx = join_ctx(&ctx, imgs[1].ctx())?;
        for p in imgs.iter() {
            if p.total_degree().unwrap_or(0) > 1 {
                return Err(MapError::DegreeTooHigh);
            }
        }
        let coord = |p: &Poly, v: Var| -> TowerElem {
            let mut e = vec![0u32; p.ring().vars().len()];
            e[p.ring().index_of(v).unwrap()] = 1;
            p.terms()
                .find(|(m, _)| **m == e)
                .map(|(_, c)| c.lift_to(&ctx).unwrap())
                .unwrap_or_else(|| TowerElem::zero(&ctx))
        };
        let cst = |p: &Poly| -> TowerElem {
            p.terms()
                .find(|(m, _)| m.iter().all(|&k| k == 0))
                .map(|(_, c)| c.lift_to(&ctx).unwrap())
                .unwrap_or_else(|| TowerElem::zero(&ctx))
        };
        let linear = [
            [coord(&imgs[0], Var::P), coord(&imgs[0], Var::Q)],
            [coord(&imgs[1], Var::P), coord(&imgs[1], Var::Q)],
        ];
        let translation = [cst(&imgs[0]), cst(&imgs[1])];
        TargetAut::new(linear, translation)
    }

    pub fn det(&self) -> TowerElem {
        &(&self.linear[0][0] * &self.linear[1][1]) - &(&self.linear[0][1] * &self.linear[1][0])
    }

    pub fn ctx(&self) -> Ctx {
        self.det().ctx().clone()
    }

    pub fn is_linear(&self) -> bool {
        self.translation.iter().all(|c| c.is_zero())
    }

    pub fn compose(&self, other: &TargetAut) -> TargetAut {
        let ctx = join_ctx(&self.ctx(), &other.ctx()).expect("towers");
        let a = |i: usize, j: usize| self.linear[i][j].lift_to(&ctx).unwrap();
        let b = |i: usize, j: usize| other.linear[i][j].lift_to(&ctx).unwrap();
        let linear = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = TowerElem::zero(&ctx);
                for k in 0..2 {
                    s = &s + &(&a(i, k) * &b(k, j));
                }
                s
            })
        });
        let translation = std::array::from_fn(|i| {
            let mut s = self.translation[i].lift_to(&ctx).unwrap();
            for k in 0..2 {
                s = &s + &(&a(i, k) * &other.translation[k].lift_to(&ctx).unwrap());
            }
            s
        });
        TargetAut { linear, translation }
    }

    pub fn inverse(&self) -> TargetAut {
        let ctx = self.ctx();
        let di = self.det().inv().expect("invertible");
        let [[a, b], [c, d]] = self.linear.clone();
        let linear = [
            [&d.lift_to(&ctx).unwrap() * &di, -&(&b.lift_to(&ctx).unwrap() * &di)],
            [-&(&c.lift_to(&ctx).unwrap() * &di), &a.lift_to(&ctx).unwrap() * &di],
        ];
        let translation = std::array::from_fn(|i| {
            let mut s = TowerElem::zero(&ctx);
            for k in 0..2 {
                s = &s + &(&linear[i][k] * &self.translation[k]);
            }
            -&s
        });
        TargetAut { linear, translation }
    }
}

impl fmt::Debug for TargetAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = Ring::new(vec![Var::P, Var::Q]);
        let ctx = self.ctx();
        let imgs: Vec<Poly> = (0..2)
            .map(|i| {
                let mut p = Poly::constant(&ring, self.translation[i].clone());
                for (j, v) in [Var::P, Var::Q].iter().enumerate() {
                    p = &p + &Poly::var(&ring, &ctx, *v).scale(&self.linear[i][j]);
                }
                p
            })
            .collect();
        write!(f, "({}, {})", imgs[0], imgs[1])
    }
}

/// Exact coefficients of Psi ∘ F ∘ Phi.
pub fn conjugate(map: &QuadMap, phi: &SourceAut, psi: &TargetAut) -> QuadMap {
    let ring = ring_xyz();
    let (f, g) = map.component_polys();
    let imgs = phi.images(&ring);
    let mut sub = BTreeMap::new();
    sub.insert(Var::X, imgs[0].clone());
    sub.insert(Var::Y, imgs[1].clone());
    sub.insert(Var::Z, imgs[2].clone());
    let f2 = f.substitute(&sub, &ring).expect("substitute");
    let g2 = g.substitute(&sub, &ring).expect("substitute");
    let ctx = join_ctx(&join_ctx(f2.ctx(), g2.ctx()).unwrap(), &psi.ctx()).unwrap();
    let comb = |i: usize| -> Poly {
        let a = f2.scale(&psi.linear[i][0].lift_to(&ctx).unwrap());
        let b = g2.scale(&psi.linear[i][1].lift_to(&ctx).unwrap());
        let t = Poly::constant(&ring, psi.translation[i].lift_to(&ctx).unwrap());
        &(&a + &b) + &t
    };
    QuadMap::from_polys(&comb(0), &comb(1)).expect("affine conjugation preserves degree")
}

// ---------------------------------------------------------------------------
// witness chains
// ---------------------------------------------------------------------------

/// One elementary, invertible coordinate change with a human-readable label.
#[derive(Clone)]
pub enum WitnessStep {
    Source(SourceAut, String),
    Target(TargetAut, String),
}

impl WitnessStep {
    pub fn label(&self) -> &str {
        match self {
            WitnessStep::Source(_, l) | WitnessStep::Target(_, l) => l,
        }
    }
}

impl fmt::Debug for WitnessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessStep::Source(a, l) => write!(f, "source {:?} [{}]", a, l),
            WitnessStep::Target(a, l) => write!(f, "target {:?} [{}]", a, l),
        }
    }
}

/// An ordered list of elementary steps. Applying the chain to a canonical
/// representative G replays the derivation and must reproduce the original
/// input exactly: steps earlier in the list are applied first.
#[derive(Clone, Default)]
pub struct WitnessChain {
    pub steps: Vec<WitnessStep>,
}

impl WitnessChain {
    pub fn new() -> Self {
        WitnessChain { steps: Vec::new() }
    }

    pub fn apply(&self, g: &QuadMap) -> QuadMap {
        let mut cur = g.clone();
        for step in &self.steps {
            cur = match step {
                WitnessStep::Source(phi, _) => {
                    conjugate(&cur, phi, &TargetAut::identity(&cur.ctx))
                }
                WitnessStep::Target(psi, _) => {
                    conjugate(&cur, &SourceAut::identity(&cur.ctx), psi)
                }
            };
        }
        cur
    }

    /// Record that the working map was transformed by (phi, psi):
    /// new = psi ∘ old ∘ phi, so the replay needs the inverses first.
    pub fn prepend_reduction(&mut self, phi: &SourceAut, psi: &TargetAut, label: &str) {
        let mut steps = Vec::with_capacity(self.steps.len() + 2);
        if !is_identity_target(psi) {
            steps.push(WitnessStep::Target(psi.inverse(), format!("undo: {}", label)));
        }
        if !is_identity_source(phi) {
            steps.push(WitnessStep::Source(phi.inverse(), format!("undo: {}", label)));
        }
        steps.extend(self.steps.drain(..));
        self.steps = steps;
    }

    /// Append a step applied after everything recorded so far.
    pub fn push_source(&mut self, phi: SourceAut, label: &str) {
        self.steps.push(WitnessStep::Source(phi, label.to_string()));
    }

    pub fn push_target(&mut self, psi: TargetAut, label: &str) {
        self.steps.push(WitnessStep::Target(psi, label.to_string()));
    }

    pub fn concat(&mut self, other: WitnessChain) {
        self.steps.extend(other.steps);
    }

    /// Compose all steps into a single (source, target) pair.
    pub fn composed(&self, ctx: &Ctx) -> (SourceAut, TargetAut) {
        let mut phi = SourceAut::identity(ctx);
        let mut psi = TargetAut::identity(ctx);
        for step in &self.steps {
            match step {
                // applying source map s to M gives M ∘ s: accumulated source
                // composes on the right of earlier sources... the replay is
                // (((G ∘ s1) ∘ s2)...) = G ∘ (s1 ∘ s2)? No: (G ∘ s1) ∘ s2 =
                // G ∘ (s1 ∘ s2) indeed with s1 applied after s2 pointwise.
                WitnessStep::Source(s, _) => phi = phi.compose(s),
                WitnessStep::Target(t, _) => psi = t.compose(&psi),
            }
        }
        (phi, psi)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Debug for WitnessChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chain of {} steps:", self.steps.len())?;
        for s in &self.steps {
            writeln!(f, "  {:?}", s)?;
        }
        Ok(())
    }
}

/// Step-by-step reduction driver: keeps the invariant
/// `chain.apply(cur) == original input` while recipes transform `cur`.
pub struct Reducer {
    pub cur: QuadMap,
    pub chain: WitnessChain,
}

impl Reducer {
    pub fn new(input: QuadMap) -> Self {
        Reducer { cur: input, chain: WitnessChain::new() }
    }

    /// Transform the working map: cur := psi ∘ cur ∘ phi.
    pub fn step(&mut self, phi: &SourceAut, psi: &TargetAut, label: &str) {
        self.cur = conjugate(&self.cur, phi, psi);
        self.chain.prepend_reduction(phi, psi, label);
    }

    pub fn step_source(&mut self, phi: &SourceAut, label: &str) {
        let psi = TargetAut::identity(&self.cur.ctx);
        self.step(phi, &psi, label);
    }

    pub fn step_target(&mut self, psi: &TargetAut, label: &str) {
        let phi = SourceAut::identity(&self.cur.ctx);
        self.step(&phi, psi, label);
    }
}

pub fn is_identity_source(a: &SourceAut) -> bool {
    a.translation.iter().all(|c| c.is_zero())
        && (0..3).all(|i| {
            (0..3).all(|j| {
                if i == j {
                    a.linear[i][j].is_one()
                } else {
                    a.linear[i][j].is_zero()
                }
            })
        })
}

pub fn is_identity_target(a: &TargetAut) -> bool {
    a.translation.iter().all(|c| c.is_zero())
        && a.linear[0][0].is_one()
        && a.linear[1][1].is_one()
        && a.linear[0][1].is_zero()
        && a.linear[1][0].is_zero()
}

/// Exact check that replaying `chain` on G reproduces F; on failure returns
/// the coefficient differences (f-diffs, g-diffs).
pub fn verify_witness(f: &QuadMap, g: &QuadMap, chain: &WitnessChain) -> Result<(), Box<QuadMap>> {
    let replay = chain.apply(g);
    let ctx = join_ctx(&replay.ctx, &f.ctx).expect("towers");
    let a = replay.lift_ctx(&ctx);
    let b = f.lift_ctx(&ctx);
    let mut diff = QuadMap::zero(&ctx);
    let mut ok = true;
    for i in 0..10 {
        diff.f[i] = &a.f[i] - &b.f[i];
        diff.g[i] = &a.g[i] - &b.g[i];
        ok &= diff.f[i].is_zero() && diff.g[i].is_zero();
    }
    if ok {
        Ok(())
    } else {
        Err(Box::new(diff))
    }
}

// convenient constructors for recipe code -----------------------------------

/// Source map given by three linear-affine images written as polys in xyz.
pub fn source_map(ctx: &Ctx, build: impl Fn(&Poly, &Poly, &Poly, &Poly) -> [Poly; 3]) -> SourceAut {
    let ring = ring_xyz();
    let x = Poly::var(&ring, ctx, Var::X);
    let y = Poly::var(&ring, ctx, Var::Y);
    let z = Poly::var(&ring, ctx, Var::Z);
    let one = Poly::one(&ring, ctx);
    let imgs = build(&x, &y, &z, &one);
    SourceAut::from_polys(&imgs).expect("invertible source map")
}

/// Target map given by two linear-affine images written as polys in (p, q).
pub fn target_map(ctx: &Ctx, build: impl Fn(&Poly, &Poly, &Poly) -> [Poly; 2]) -> TargetAut {
    let ring = ring_pq2();
    let p = Poly::var(&ring, ctx, Var::P);
    let q = Poly::var(&ring, ctx, Var::Q);
    let one = Poly::one(&ring, ctx);
    let imgs = build(&p, &q, &one);
    TargetAut::from_polys(&imgs).expect("invertible target map")
}

pub fn ring_pq2() -> RingRef {
    Ring::new(vec![Var::P, Var::Q])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;

    fn ctx() -> Ctx {
        Tower::base()
    }

    /// (x^2+z^2, y^2+z^2) as integer coefficient vectors.
    fn f7(c: &Ctx) -> QuadMap {
        QuadMap::from_ints(c, [1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 1, 0, 0, 0, 0])
    }

    #[test]
    fn minors_of_f7() {
        let c = ctx();
        let m = f7(&c).minors();
        // (4xy, 4xz, -4yz)
        let ring = ring_xyz();
        let x = Poly::var(&ring, &c, Var::X);
        let y = Poly::var(&ring, &c, Var::Y);
        let z = Poly::var(&ring, &c, Var::Z);
        let four = Poly::constant(&ring, TowerElem::from_int(&c, 4));
        assert_eq!(m.0, &four * &(&x * &y));
        assert_eq!(m.1, &four * &(&x * &z));
        assert_eq!(m.2, (&four * &(&y * &z)).neg());
    }

    #[test]
    fn minors_of_linear_map() {
        let c = ctx();
        let m = QuadMap::from_ints(
            &c,
            [0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        )
        .minors();
        assert_eq!(m.0.as_constant().unwrap(), TowerElem::from_int(&c, 1));
        assert!(m.1.is_zero());
        assert!(m.2.is_zero());
    }

    #[test]
    fn top_part_strips_lower_terms() {
        let c = ctx();
        // (x^2+z^2+y, y^2+z^2+x+z) -> (x^2+z^2, y^2+z^2)
        let m = QuadMap::from_ints(
            &c,
            [1, 0, 0, 0, 0, 1, 0, 1, 0, 0],
            [0, 0, 0, 1, 0, 1, 1, 0, 1, 0],
        );
        assert_eq!(m.top_part(), f7(&c));
        // (xy+z, y^2+x) -> (xy, y^2)
        let m = QuadMap::from_ints(
            &c,
            [0, 1, 0, 0, 0, 0, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, 0, 1, 0, 0, 0],
        );
        let top = QuadMap::from_ints(
            &c,
            [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        );
        assert_eq!(m.top_part(), top);
        // (x, 0) -> (x, 0)
        let m = QuadMap::from_ints(&c, [0, 0, 0, 0, 0, 0, 1, 0, 0, 0], [0; 10]);
        assert_eq!(m.top_part(), m);
    }

    #[test]
    fn conjugation_identity_and_inverse() {
        let c = ctx();
        let m = f7(&c);
        let id = conjugate(&m, &SourceAut::identity(&c), &TargetAut::identity(&c));
        assert_eq!(id, m);

        let phi = source_map(&c, |x, y, z, one| {
            [&(x + y) + one, &(y - z) + &(one + one), z.clone()]
        });
        let psi = target_map(&c, |p, q, one| [&(p + q) - one, q + &(one + one)]);
        let conj = conjugate(&m, &phi, &psi);
        let back = conjugate(&conj, &phi.inverse(), &psi.inverse());
        assert_eq!(back, m);
    }

    #[test]
    fn group_action_order() {
        // conj(conj(F, p1, s1), p2, s2) = conj(F, p1∘p2, s2∘s1)
        let c = ctx();
        let m = QuadMap::from_ints(
            &c,
            [1, 2, 0, 0, 1, 1, 0, 1, 0, 0],
            [0, 0, 1, 1, 0, 1, 1, 0, 1, 0],
        );
        let p1 = source_map(&c, |x, y, z, one| [&(x + z) + one, y.clone(), &(z - x) + one]);
        let p2 = source_map(&c, |x, y, z, _| [y + x, x - y, z + y]);
        let s1 = target_map(&c, |p, q, one| [p + q, &(q - p) + one]);
        let s2 = target_map(&c, |p, q, one| [q + one, p.clone()]);
        let lhs = conjugate(&conjugate(&m, &p1, &s1), &p2, &s2);
        let rhs = conjugate(&m, &p1.compose(&p2), &s2.compose(&s1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn witness_chain_replay_and_soundness_probe() {
        let c = ctx();
        let g = f7(&c);
        let phi = source_map(&c, |x, y, z, one| [&(x - z) + one, y + x, z.clone()]);
        let psi = target_map(&c, |p, q, one| [&(p - q) + one, q.clone()]);
        let f = conjugate(&g, &phi, &psi);
        let mut chain = WitnessChain::new();
        chain.push_source(phi, "test source");
        chain.push_target(psi, "test target");
        assert!(verify_witness(&f, &g, &chain).is_ok());
        // empty chain on equal maps
        assert!(verify_witness(&g, &g, &WitnessChain::new()).is_ok());
        // perturbed translation must fail with a nonzero diff
        let mut bad = chain.clone();
        if let WitnessStep::Source(phi, _) = &mut bad.steps[0] {
            phi.translation[0] = &phi.translation[0] + &TowerElem::from_int(&c, 1);
        }
        let err = verify_witness(&f, &g, &bad).unwrap_err();
        assert!(!err.is_zero());
        // composed form agrees with the replay
        let (cphi, cpsi) = chain.composed(&c);
        assert_eq!(conjugate(&g, &cphi, &cpsi), f);
    }
}
