//! Sparse multivariate polynomials over a tower field.
//!
//! This is the computational kernel behind every discriminant-style
//! polynomial and elimination step: substitution, resultants via the
//! Sylvester determinant (computed fraction-free), univariate gcd and
//! Yun squarefree decomposition, and root extraction in radical towers.

use crate::field::{extend_cubic, Ctx, FieldError, GaussRat, TowerElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("polynomial rings do not match")]
    RingMismatch,
    #[error("polynomial is not univariate in the requested variable")]
    NotUnivariate,
    #[error("root extraction unsupported at this degree")]
    DegreeUnsupported,
    #[error("cubic root would need an extension the field policy forbids")]
    CubicOutsidePolicy,
    #[error("exact division failed")]
    NotDivisible,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The fixed universe of variable names used across the engine.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X,
    Y,
    Z,
    P,
    Q,
    T,
    A,
    B,
    Alpha,
    Beta,
    Lambda,
    Mu,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::P => "p",
            Var::Q => "q",
            Var::T => "t",
            Var::A => "A",
            Var::B => "B",
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Lambda => "lambda",
            Var::Mu => "mu",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ring {
    vars: Vec<Var>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(vars: Vec<Var>) -> RingRef {
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), vars.len(), "duplicate ring variables");
        Arc::new(Ring { vars })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }
}

pub fn ring_xyz() -> RingRef {
    Ring::new(vec![Var::X, Var::Y, Var::Z])
}

pub fn ring_pq() -> RingRef {
    Ring::new(vec![Var::P, Var::Q])
}

#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    ctx: Ctx,
    /// exponent vector (length |ring|) -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, TowerElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.ring.vars != other.ring.vars {
            return false;
        }
        (self - other).is_zero()
    }
}

impl Poly {
    pub fn zero(ring: &RingRef, ctx: &Ctx) -> Poly {
        Poly { ring: ring.clone(), ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingRef, c: TowerElem) -> Poly {
        let ctx = c.ctx().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.vars.len()], c);
        }
        Poly { ring: ring.clone(), ctx, terms }
    }

    pub fn one(ring: &RingRef, ctx: &Ctx) -> Poly {
        Poly::constant(ring, TowerElem::one(ctx))
    }

    pub fn var(ring: &RingRef, ctx: &Ctx, v: Var) -> Poly {
        let i = ring.index_of(v).expect("variable not in ring");
        let mut e = vec![0; ring.vars.len()];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, TowerElem::one(ctx));
        Poly { ring: ring.clone(), ctx: ctx.clone(), terms }
    }

    pub fn from_terms(
        ring: &RingRef,
        ctx: &Ctx,
        terms: impl IntoIterator<Item = (Vec<u32>, TowerElem)>,
    ) -> Poly {
        let mut out = Poly::zero(ring, ctx);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &TowerElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn as_constant(&self) -> Option<TowerElem> {
        if self.is_zero() {
            return Some(TowerElem::zero(&self.ctx));
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        let i = self.ring.index_of(v)?;
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn uses_var(&self, v: Var) -> bool {
        match self.ring.index_of(v) {
            None => false,
            Some(i) => self.terms.keys().any(|e| e[i] > 0),
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: TowerElem) {
        assert_eq!(e.len(), self.ring.vars.len());
        if c.is_zero() {
            return;
        }
        let ctx = join_ctx(&self.ctx, c.ctx()).expect("incompatible towers in poly");
        if ctx.levels() != self.ctx.levels() {
            *self = self.lift_ctx(&ctx);
        }
        let c = c.lift_to(&self.ctx).expect("lift");
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn lift_ctx(&self, ctx: &Ctx) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.lift_to(ctx).expect("ctx lift")))
            .collect();
        Poly { ring: self.ring.clone(), ctx: ctx.clone(), terms }
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Poly { ring: self.ring.clone(), ctx: self.ctx.clone(), terms }
    }

    pub fn scale(&self, c: &TowerElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring, &self.ctx);
        }
        let ctx = join_ctx(&self.ctx, c.ctx()).expect("incompatible towers");
        let c = c.lift_to(&ctx).unwrap();
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (e.clone(), &k.lift_to(&ctx).unwrap() * &c))
            .filter(|(_, k)| !k.is_zero())
            .collect();
        Poly { ring: self.ring.clone(), ctx, terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.ring, &self.ctx);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let i = self.ring.index_of(v).expect("variable not in ring");
        let mut out = Poly::zero(&self.ring, &self.ctx);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let k = TowerElem::from_int(&self.ctx, e[i] as i64);
            out.add_term(e2, c * &k);
        }
        out
    }

    /// Leading term in the lexicographic order of exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<u32>, &TowerElem)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient self / d, or None if d does not divide self.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.ring.vars, d.ring.vars, "ring mismatch");
        if d.is_zero() {
            return None;
        }
        let ctx = join_ctx(&self.ctx, &d.ctx).ok()?;
        let mut r = self.lift_ctx(&ctx);
        let d = d.lift_ctx(&ctx);
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let dc_inv = dc.inv().ok()?;
        let mut q = Poly::zero(&self.ring, &ctx);
        while !r.is_zero() {
            let (rm, rc) = {
                let (m, c) = r.leading().unwrap();
                (m.clone(), c.clone())
            };
            let mut em = Vec::with_capacity(rm.len());
            for (a, b) in rm.iter().zip(dm.iter()) {
                if a < b {
                    return None;
                }
                em.push(a - b);
            }
            let c = &rc * &dc_inv;
            let t = Poly::from_terms(&self.ring, &ctx, [(em, c)]);
            q = &q + &t;
            r = &r - &(&t * &d);
        }
        Some(q)
    }

    /// Substitute variables by polynomials. Unassigned variables must exist
    /// in the target ring; assigned images must all live in `target`.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<Var, Poly>,
        target: &RingRef,
    ) -> Result<Poly, PolyError> {
        for img in assignment.values() {
            if img.ring.vars != target.vars {
                return Err(PolyError::RingMismatch);
            }
        }
        let mut ctx = self.ctx.clone();
        for img in assignment.values() {
            ctx = join_ctx(&ctx, &img.ctx)?;
        }
        // precompute powers of each image
        let mut powers: BTreeMap<Var, Vec<Poly>> = BTreeMap::new();
        for (i, &v) in self.ring.vars.iter().enumerate() {
            let maxe = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            if maxe == 0 {
                continue;
            }
            if let Some(img) = assignment.get(&v) {
                let img = img.lift_ctx(&ctx);
                let mut pw = vec![Poly::one(target, &ctx)];
                for k in 1..=maxe {
                    pw.push(&pw[(k - 1) as usize] * &img);
                }
                powers.insert(v, pw);
            } else if target.index_of(v).is_none() {
                return Err(PolyError::RingMismatch);
            }
        }
        let mut out = Poly::zero(target, &ctx);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.lift_to(&ctx).unwrap());
            for (i, &v) in self.ring.vars.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                match powers.get(&v) {
                    Some(pw) => term = &term * &pw[e[i] as usize],
                    None => {
                        // keep the variable as itself in the target ring
                        let vi = target.index_of(v).ok_or(PolyError::RingMismatch)?;
                        let mut ev = vec![0; target.vars.len()];
                        ev[vi] = e[i];
                        term = &term * &Poly::from_terms(target, &ctx, [(ev, TowerElem::one(&ctx))]);
                    }
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Full evaluation at a point.
    pub fn eval(&self, point: &BTreeMap<Var, TowerElem>) -> Result<TowerElem, PolyError> {
        let mut ctx = self.ctx.clone();
        for v in point.values() {
            ctx = join_ctx(&ctx, v.ctx())?;
        }
        let mut acc = TowerElem::zero(&ctx);
        for (e, c) in &self.terms {
            let mut t = c.lift_to(&ctx).unwrap();
            for (i, &v) in self.ring.vars.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let x = point.get(&v).ok_or(PolyError::NotUnivariate)?.lift_to(&ctx).unwrap();
                t = &t * &x.pow(e[i]);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Coefficient vector (little-endian) when the polynomial involves only
    /// `v`.
    pub fn as_univar(&self, v: Var) -> Result<Vec<TowerElem>, PolyError> {
        let i = self.ring.index_of(v).ok_or(PolyError::NotUnivariate)?;
        let deg = self.degree_in(v).unwrap_or(0);
        let mut out = vec![TowerElem::zero(&self.ctx); (deg + 1) as usize];
        for (e, c) in &self.terms {
            for (j, &ej) in e.iter().enumerate() {
                if j != i && ej > 0 {
                    return Err(PolyError::NotUnivariate);
                }
            }
            out[e[i] as usize] = c.clone();
        }
        Ok(out)
    }

    pub fn from_univar(ring: &RingRef, v: Var, coeffs: &[TowerElem], ctx: &Ctx) -> Poly {
        let i = ring.index_of(v).expect("variable not in ring");
        let mut out = Poly::zero(ring, ctx);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; ring.vars.len()];
            e[i] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Coefficients with respect to `v`, as polynomials in the other
    /// variables (little-endian).
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let i = self.ring.index_of(v).expect("variable not in ring");
        let deg = self.degree_in(v).unwrap_or(0);
        let mut out = vec![Poly::zero(&self.ring, &self.ctx); (deg + 1) as usize];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            out[k as usize].add_term(e2, c.clone());
        }
        out
    }
}

pub fn join_ctx(a: &Ctx, b: &Ctx) -> Result<Ctx, PolyError> {
    if a.levels() == b.levels() {
        Ok(a.clone())
    } else if a.is_extension_of(b) {
        Ok(a.clone())
    } else if b.is_extension_of(a) {
        Ok(b.clone())
    } else {
        Err(PolyError::RingMismatch)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ring.vars, rhs.ring.vars, "ring mismatch");
        let ctx = join_ctx(&self.ctx, &rhs.ctx).expect("incompatible towers");
        let mut out = self.lift_ctx(&ctx);
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.lift_to(&ctx).unwrap());
        }
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.neg()
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.ring.vars, rhs.ring.vars, "ring mismatch");
        let ctx = join_ctx(&self.ctx, &rhs.ctx).expect("incompatible towers");
        let mut out = Poly::zero(&self.ring, &ctx);
        for (e1, c1) in &self.terms {
            let c1 = c1.lift_to(&ctx).unwrap();
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &c1 * &c2.lift_to(&ctx).unwrap());
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut printed = false;
            if !c.is_one() || e.iter().all(|&k| k == 0) {
                write!(f, "({})", c)?;
                printed = true;
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                printed = true;
                write!(f, "{}", self.ring.vars[i].name())?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// univariate toolkit over the tower field
// ---------------------------------------------------------------------------

pub fn utrim(v: &mut Vec<TowerElem>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

pub fn udeg(v: &[TowerElem]) -> usize {
    let mut d = v.len();
    while d > 1 && v[d - 1].is_zero() {
        d -= 1;
    }
    d - 1
}

pub fn u_is_zero(v: &[TowerElem]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn umul(a: &[TowerElem], b: &[TowerElem], ctx: &Ctx) -> Vec<TowerElem> {
    let mut out = vec![TowerElem::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    utrim(&mut out);
    out
}

pub fn usub(a: &[TowerElem], b: &[TowerElem], ctx: &Ctx) -> Vec<TowerElem> {
    let n = a.len().max(b.len());
    let z = TowerElem::zero(ctx);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z));
    }
    utrim(&mut out);
    out
}

pub fn udivmod(
    num: &[TowerElem],
    den: &[TowerElem],
    ctx: &Ctx,
) -> Result<(Vec<TowerElem>, Vec<TowerElem>), PolyError> {
    let mut r = num.to_vec();
    utrim(&mut r);
    let mut d = den.to_vec();
    utrim(&mut d);
    if u_is_zero(&d) {
        return Err(PolyError::Field(FieldError::DivisionByZero));
    }
    let dn = d.len() - 1;
    let lead_inv = d.last().unwrap().inv()?;
    let qlen = r.len().saturating_sub(dn).max(1);
    let mut q = vec![TowerElem::zero(ctx); qlen];
    while !u_is_zero(&r) && r.len() - 1 >= dn {
        let k = r.len() - 1 - dn;
        let c = r.last().unwrap() * &lead_inv;
        let mut shifted = vec![TowerElem::zero(ctx); k];
        for dc in &d {
            shifted.push(dc * &c);
        }
        r = usub(&r, &shifted, ctx);
        q[k] = &q[k] + &c;
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    utrim(&mut q);
    Ok((q, r))
}

pub fn umonic(v: &[TowerElem], ctx: &Ctx) -> Vec<TowerElem> {
    let mut v = v.to_vec();
    utrim(&mut v);
    if u_is_zero(&v) {
        return v;
    }
    let inv = v.last().unwrap().inv().expect("nonzero leading coefficient");
    for c in &mut v {
        *c = &*c * &inv;
    }
    let _ = ctx;
    v
}

pub fn ugcd(a: &[TowerElem], b: &[TowerElem], ctx: &Ctx) -> Vec<TowerElem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    utrim(&mut a);
    utrim(&mut b);
    if u_is_zero(&a) {
        return umonic(&b, ctx);
    }
    while !u_is_zero(&b) {
        let (_, r) = udivmod(&a, &b, ctx).expect("gcd division");
        a = b;
        b = r;
        utrim(&mut b);
    }
    umonic(&a, ctx)
}

pub fn uderiv(v: &[TowerElem], ctx: &Ctx) -> Vec<TowerElem> {
    if v.len() <= 1 {
        return vec![TowerElem::zero(ctx)];
    }
    let mut out = Vec::with_capacity(v.len() - 1);
    for (k, c) in v.iter().enumerate().skip(1) {
        out.push(c * &TowerElem::from_int(ctx, k as i64));
    }
    utrim(&mut out);
    out
}

pub fn ueval(v: &[TowerElem], x: &TowerElem) -> TowerElem {
    let mut acc = TowerElem::zero(x.ctx());
    for c in v.iter().rev() {
        acc = &(&acc * x) + &c.lift_to(x.ctx()).unwrap_or_else(|_| c.clone());
    }
    acc
}

// ---------------------------------------------------------------------------
// gcd / squarefree / resultant on Poly
// ---------------------------------------------------------------------------

/// Monic gcd of two polynomials univariate in `v`.
pub fn gcd_univar(f: &Poly, g: &Poly, v: Var) -> Result<Poly, PolyError> {
    let fa = f.as_univar(v)?;
    let ga = g.as_univar(v)?;
    let ctx = join_ctx(&f.ctx, &g.ctx)?;
    let fa: Vec<_> = fa.iter().map(|c| c.lift_to(&ctx).unwrap()).collect();
    let ga: Vec<_> = ga.iter().map(|c| c.lift_to(&ctx).unwrap()).collect();
    let d = ugcd(&fa, &ga, &ctx);
    Ok(Poly::from_univar(&f.ring, v, &d, &ctx))
}

/// Yun decomposition: for each multiplicity m appearing in f, the degree of
/// the (squarefree) product of the roots of multiplicity m. Entries are
/// sorted by multiplicity; the degrees weighted by multiplicity sum to
/// deg f.
pub fn squarefree_profile(f: &Poly, v: Var) -> Result<Vec<(u32, u32)>, PolyError> {
    let fa = f.as_univar(v)?;
    let ctx = f.ctx.clone();
    let mut fa = fa;
    utrim(&mut fa);
    if u_is_zero(&fa) || fa.len() == 1 {
        return Ok(vec![]);
    }
    let fp = uderiv(&fa, &ctx);
    let g = ugcd(&fa, &fp, &ctx);
    let (mut c, _) = udivmod(&fa, &g, &ctx)?;
    let (gp, _) = udivmod(&fp, &g, &ctx)?;
    let mut d = usub(&gp, &uderiv(&c, &ctx), &ctx);
    let mut out = Vec::new();
    let mut m = 1u32;
    while udeg(&c) > 0 {
        let p = ugcd(&c, &d, &ctx);
        if udeg(&p) > 0 {
            out.push((m, udeg(&p) as u32));
        }
        let (c2, _) = udivmod(&c, &p, &ctx)?;
        let (dq, _) = udivmod(&d, &p, &ctx)?;
        d = usub(&dq, &uderiv(&c2, &ctx), &ctx);
        c = c2;
        m += 1;
    }
    Ok(out)
}

/// The squarefree part with all multiplicities collapsed to one (monic).
pub fn squarefree_part(f: &Poly, v: Var) -> Result<Poly, PolyError> {
    let fa = f.as_univar(v)?;
    let ctx = f.ctx.clone();
    let mut fa = fa;
    utrim(&mut fa);
    if u_is_zero(&fa) || fa.len() == 1 {
        return Ok(Poly::one(&f.ring, &ctx));
    }
    let g = ugcd(&fa, &uderiv(&fa, &ctx), &ctx);
    let (q, _) = udivmod(&fa, &g, &ctx)?;
    Ok(Poly::from_univar(&f.ring, v, &umonic(&q, &ctx), &ctx))
}

/// Resultant of f and g with respect to `v`, by the Sylvester determinant
/// with the rows of f-coefficients (repeated deg g times) above the rows of
/// g-coefficients (repeated deg f times), evaluated fraction-free (Bareiss).
pub fn resultant(f: &Poly, g: &Poly, v: Var) -> Result<Poly, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(&f.ring, &f.ctx));
    }
    let ctx = join_ctx(&f.ctx, &g.ctx)?;
    let fc: Vec<Poly> = f.lift_ctx(&ctx).coeffs_in(v);
    let gc: Vec<Poly> = g.lift_ctx(&ctx).coeffs_in(v);
    let n = fc.len() - 1; // deg_v f
    let m = gc.len() - 1; // deg_v g
    if n == 0 && m == 0 {
        return Ok(Poly::one(&f.ring, &ctx));
    }
    if n == 0 {
        return Ok(fc[0].pow(m as u32));
    }
    if m == 0 {
        return Ok(gc[0].pow(n as u32));
    }
    let size = n + m;
    let zero = Poly::zero(&f.ring, &ctx);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..m {
        for (k, c) in fc.iter().enumerate() {
            // row i, descending coefficients: col j holds f_{n-(j-i)}
            mat[i][i + (n - k)] = c.clone();
        }
    }
    for i in 0..n {
        for (k, c) in gc.iter().enumerate() {
            mat[m + i][i + (m - k)] = c.clone();
        }
    }
    bareiss_det(mat, &f.ring, &ctx)
}

/// Fraction-free determinant of a square matrix of polynomials.
pub fn bareiss_det(mut mat: Vec<Vec<Poly>>, ring: &RingRef, ctx: &Ctx) -> Result<Poly, PolyError> {
    let n = mat.len();
    if n == 0 {
        return Ok(Poly::one(ring, ctx));
    }
    let mut sign = false;
    let mut prev = Poly::one(ring, ctx);
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !mat[i][k].is_zero());
            match swap {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(Poly::zero(ring, ctx)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[k][k] * &mat[i][j]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = if num.is_zero() {
                    num
                } else {
                    num.exact_div(&prev).ok_or(PolyError::NotDivisible)?
                };
            }
            mat[i][k] = Poly::zero(ring, ctx);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

// ---------------------------------------------------------------------------
// roots
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldPolicy {
    pub allow_cubic: bool,
}

impl Default for FieldPolicy {
    fn default() -> Self {
        FieldPolicy { allow_cubic: true }
    }
}

/// All roots of a univariate polynomial of degree <= 3 expressible under the
/// field policy, with multiplicities, together with the (possibly extended)
/// tower.
pub fn roots_in_tower(
    f: &Poly,
    v: Var,
    policy: FieldPolicy,
) -> Result<(Vec<(TowerElem, u32)>, Ctx), PolyError> {
    let mut coeffs = f.as_univar(v)?;
    utrim(&mut coeffs);
    let ctx = f.ctx.clone();
    uroots_in_tower(&coeffs, &ctx, policy)
}

pub fn uroots_in_tower(
    coeffs: &[TowerElem],
    ctx: &Ctx,
    policy: FieldPolicy,
) -> Result<(Vec<(TowerElem, u32)>, Ctx), PolyError> {
    let mut coeffs = coeffs.to_vec();
    utrim(&mut coeffs);
    if u_is_zero(&coeffs) {
        return Err(PolyError::DegreeUnsupported);
    }
    match coeffs.len() - 1 {
        0 => Ok((vec![], ctx.clone())),
        1 => {
            let r = -&(coeffs[0].try_div(&coeffs[1])?);
            Ok((vec![(r, 1)], ctx.clone()))
        }
        2 => {
            let a = &coeffs[2];
            let b = &coeffs[1];
            let c = &coeffs[0];
            let disc = &(b * b) - &(&(a * c) * &TowerElem::from_int(ctx, 4));
            if disc.is_zero() {
                let r = (-b).try_div(&(a + a))?;
                return Ok((vec![(r, 2)], ctx.clone()));
            }
            let (s, ctx2) = disc.sqrt()?;
            let a2 = a.lift_to(&ctx2).unwrap();
            let b2 = b.lift_to(&ctx2).unwrap();
            let two_a = &a2 + &a2;
            let r1 = (&(-&b2) + &s).try_div(&two_a)?;
            let r2 = (&(-&b2) - &s).try_div(&two_a)?;
            Ok((vec![(r1, 1), (r2, 1)], ctx2))
        }
        3 => cubic_roots(&coeffs, ctx, policy),
        _ => Err(PolyError::DegreeUnsupported),
    }
}

fn cubic_roots(
    coeffs: &[TowerElem],
    ctx: &Ctx,
    policy: FieldPolicy,
) -> Result<(Vec<(TowerElem, u32)>, Ctx), PolyError> {
    // multiple roots never need extensions: peel them off via gcd
    let der = uderiv(coeffs, ctx);
    let g = ugcd(coeffs, &der, ctx);
    if udeg(&g) > 0 {
        if udeg(&g) == 2 {
            // triple root: g = (t - r)^2
            let gg = ugcd(&g, &uderiv(&g, ctx), ctx);
            let r = -&gg[0]; // monic linear t + c
            return Ok((vec![(r, 3)], ctx.clone()));
        }
        // one double root r = -g0 (g monic linear), remaining simple root
        let r = -&g[0];
        let lin = vec![g[0].clone(), TowerElem::one(ctx)];
        let sq = umul(&lin, &lin, ctx);
        let (rest, rem) = udivmod(coeffs, &sq, ctx)?;
        debug_assert!(u_is_zero(&rem));
        let s = -&(rest[0].try_div(&rest[1])?);
        if s == r {
            return Ok((vec![(r, 3)], ctx.clone()));
        }
        return Ok((vec![(r, 2), (s, 1)], ctx.clone()));
    }
    // squarefree: look for a root already in the tower (complete over Q(i))
    let gauss: Option<Vec<GaussRat>> = coeffs.iter().map(|c| c.to_gauss()).collect();
    if let Some(gc) = gauss {
        if let Some(root) = gauss_rational_root(&gc) {
            let r = TowerElem::from_gauss(ctx, root);
            let lin = vec![-&r, TowerElem::one(ctx)];
            let (quad, rem) = udivmod(coeffs, &lin, ctx)?;
            debug_assert!(u_is_zero(&rem));
            let (mut rs, ctx2) = uroots_in_tower(&quad, ctx, policy)?;
            rs.push((r.lift_to(&ctx2).unwrap(), 1));
            rs.rotate_right(1);
            return Ok((rs, ctx2));
        }
        // irreducible over Q(i): adjoin the cubic if the policy allows it
        if !policy.allow_cubic || ctx.depth() != 0 {
            return Err(PolyError::CubicOutsidePolicy);
        }
        let lc_inv = coeffs[3].inv()?;
        let monic: Vec<GaussRat> = coeffs
            .iter()
            .map(|c| (c * &lc_inv).to_gauss().unwrap())
            .collect();
        let ctx2 = extend_cubic(ctx, monic[0].clone(), monic[1].clone(), monic[2].clone())?;
        let t = TowerElem::generator(&ctx2, 0);
        let lifted: Vec<TowerElem> =
            coeffs.iter().map(|c| c.lift_to(&ctx2).unwrap()).collect();
        let lin = vec![-&t, TowerElem::one(&ctx2)];
        let (quad, rem) = udivmod(&lifted, &lin, &ctx2)?;
        debug_assert!(u_is_zero(&rem));
        let (mut rs, ctx3) = uroots_in_tower(&quad, &ctx2, policy)?;
        rs.push((t.lift_to(&ctx3).unwrap(), 1));
        rs.rotate_right(1);
        return Ok((rs, ctx3));
    }
    Err(PolyError::CubicOutsidePolicy)
}

// ---------------------------------------------------------------------------
// Gaussian-rational root search
// ---------------------------------------------------------------------------

/// One root in Q(i) of a polynomial with Q(i) coefficients, if any exists.
///
/// Clears denominators to Z[i] and runs the rational root test: candidates
/// p/q with p dividing the constant term and q dividing the leading term,
/// divisors enumerated through their integer norms. A float-guided guess
/// with exact verification backs the search when norms get large.
pub fn gauss_rational_root(coeffs: &[GaussRat]) -> Option<GaussRat> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    if c.len() <= 1 {
        return None;
    }
    // zero constant term: 0 is a root
    if c[0].is_zero() {
        return Some(GaussRat::zero());
    }
    // clear denominators
    let mut den = BigInt::one();
    for g in &c {
        den = num_integer::lcm(den.clone(), g.re.denom().clone());
        den = num_integer::lcm(den, g.im.denom().clone());
    }
    let zi: Vec<(BigInt, BigInt)> = c
        .iter()
        .map(|g| {
            let re = &g.re * BigRational::from_integer(den.clone());
            let im = &g.im * BigRational::from_integer(den.clone());
            (re.to_integer(), im.to_integer())
        })
        .collect();
    let lead = zi.last().unwrap();
    let cst = &zi[0];
    let norm = |z: &(BigInt, BigInt)| -> BigInt { &z.0 * &z.0 + &z.1 * &z.1 };
    let n_lead = norm(lead);
    let n_cst = norm(cst);
    let eval = |root: &GaussRat| -> bool {
        let mut acc = GaussRat::zero();
        for g in c.iter().rev() {
            acc = &(&acc * root) + g;
        }
        acc.is_zero()
    };
    let bound = BigInt::from(4_000_000u64);
    if n_lead <= bound && n_cst <= bound {
        let dl = gauss_divisors(lead, n_lead.to_u64().unwrap());
        let dc = gauss_divisors(cst, n_cst.to_u64().unwrap());
        for p in &dc {
            for q in &dl {
                for unit in 0..4u8 {
                    let (pu_re, pu_im) = match unit {
                        0 => (p.0.clone(), p.1.clone()),
                        1 => (-p.1.clone(), p.0.clone()),
                        2 => (-p.0.clone(), -p.1.clone()),
                        _ => (p.1.clone(), -p.0.clone()),
                    };
                    let qn = norm(q);
                    // (pu / q) = pu * conj(q) / |q|^2
                    let re = (&pu_re * &q.0 + &pu_im * &q.1).to_string();
                    let im = (&pu_im * &q.0 - &pu_re * &q.1).to_string();
                    let cand = GaussRat {
                        re: BigRational::new(re.parse().unwrap(), qn.clone()),
                        im: BigRational::new(im.parse().unwrap(), qn),
                    };
                    if eval(&cand) {
                        return Some(cand);
                    }
                }
            }
        }
        None
    } else {
        float_guided_root(&c)
    }
}

/// Divisors of a nonzero Gaussian integer, one per associate class, found by
/// scanning norm divisors.
fn gauss_divisors(z: &(BigInt, BigInt), norm: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut norm_divs = Vec::new();
    let mut d = 1u64;
    while d * d <= norm {
        if norm % d == 0 {
            norm_divs.push(d);
            if d != norm / d {
                norm_divs.push(norm / d);
            }
        }
        d += 1;
    }
    for nd in norm_divs {
        // all (a, b) with a^2 + b^2 = nd, a >= 0
        let mut a = 0u64;
        while a * a <= nd {
            let rem = nd - a * a;
            let b = (rem as f64).sqrt() as u64;
            for bb in b.saturating_sub(1)..=b + 1 {
                if a * a + bb * bb == nd {
                    for (sa, sb) in [(1i8, 1i8), (1, -1)] {
                        let ca = BigInt::from(a) * sa;
                        let cb = BigInt::from(bb) * sb;
                        if ca.is_zero() && cb.is_zero() {
                            continue;
                        }
                        // test divisibility: (z * conj(w)) divisible by |w|^2
                        let nw = &ca * &ca + &cb * &cb;
                        let re = &z.0 * &ca + &z.1 * &cb;
                        let im = &z.1 * &ca - &z.0 * &cb;
                        if (&re % &nw).is_zero() && (&im % &nw).is_zero() {
                            out.push((ca, cb));
                        }
                    }
                }
            }
            a += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Numeric root guesses (Durand-Kerner) rationalized by continued fractions
/// and verified exactly.
fn float_guided_root(coeffs: &[GaussRat]) -> Option<GaussRat> {
    let n = coeffs.len() - 1;
    let cf: Vec<(f64, f64)> = coeffs
        .iter()
        .map(|g| (g.re.to_f64().unwrap_or(0.0), g.im.to_f64().unwrap_or(0.0)))
        .collect();
    let lead = cf[n];
    let cdiv = |a: (f64, f64), b: (f64, f64)| -> (f64, f64) {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let eval = |x: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for c in cf.iter().rev() {
            acc = cmul(acc, x);
            acc = (acc.0 + c.0, acc.1 + c.1);
        }
        acc
    };
    let mut roots: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 0.7 + 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            (1.3 * ang.cos(), 1.3 * ang.sin())
        })
        .collect();
    for _ in 0..200 {
        for i in 0..n {
            let mut denom = lead;
            for j in 0..n {
                if i != j {
                    let d = (roots[i].0 - roots[j].0, roots[i].1 - roots[j].1);
                    denom = cmul(denom, d);
                }
            }
            let corr = cdiv(eval(roots[i]), denom);
            roots[i] = (roots[i].0 - corr.0, roots[i].1 - corr.1);
        }
    }
    let exact_eval = |root: &GaussRat| -> bool {
        let mut acc = GaussRat::zero();
        for g in coeffs.iter().rev() {
            acc = &(&acc * root) + g;
        }
        acc.is_zero()
    };
    for r in roots {
        for maxden in [1u64, 2, 3, 4, 6, 8, 12, 16, 24, 48, 96, 1024, 1 << 20] {
            let re = rationalize(r.0, maxden);
            let im = rationalize(r.1, maxden);
            let cand = GaussRat { re, im };
            if exact_eval(&cand) {
                return Some(cand);
            }
        }
    }
    None
}

fn rationalize(x: f64, maxden: u64) -> BigRational {
    // continued fraction expansion with denominator bound
    let mut h = (BigInt::one(), BigInt::zero());
    let mut k = (BigInt::zero(), BigInt::one());
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if !a.is_finite() {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h.0 + &h.1;
        let k2 = &ai * &k.0 + &k.1;
        if k2 > BigInt::from(maxden) {
            break;
        }
        h = (h2, h.0);
        k = (k2, k.0);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if k.0.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(h.0, k.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;

    fn ctx() -> Ctx {
        Tower::base()
    }

    fn tring() -> RingRef {
        Ring::new(vec![Var::T])
    }

    fn tpoly(c: &Ctx, coeffs: &[i64]) -> Poly {
        let cs: Vec<TowerElem> = coeffs.iter().map(|&k| TowerElem::from_int(c, k)).collect();
        Poly::from_univar(&tring(), Var::T, &cs, c)
    }

    /// Naive cofactor-expansion determinant: the independent oracle for the
    /// Bareiss path.
    fn naive_det(mat: &[Vec<Poly>], ring: &RingRef, ctx: &Ctx) -> Poly {
        let n = mat.len();
        if n == 0 {
            return Poly::one(ring, ctx);
        }
        if n == 1 {
            return mat[0][0].clone();
        }
        let mut acc = Poly::zero(ring, ctx);
        for j in 0..n {
            if mat[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = mat[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let sub = naive_det(&minor, ring, ctx);
            let term = &mat[0][j] * &sub;
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn resultant_convention_pinned() {
        let c = ctx();
        // Res_t(t, t-1) = -1 under the f-above-g Sylvester convention
        let f = tpoly(&c, &[0, 1]);
        let g = tpoly(&c, &[-1, 1]);
        let r = resultant(&f, &g, Var::T).unwrap();
        assert_eq!(r.as_constant().unwrap(), TowerElem::from_int(&c, -1));
    }

    #[test]
    fn resultant_t2_minus_a_t3_minus_a() {
        // Res_t(t^2 - A, t^3 - A) = A^2 - A^3 (product formula over +-sqrt A)
        let c = ctx();
        let ring = Ring::new(vec![Var::T, Var::A]);
        let t = Poly::var(&ring, &c, Var::T);
        let a = Poly::var(&ring, &c, Var::A);
        let f = &(&t * &t) - &a;
        let g = &(&t * &(&t * &t)) - &a;
        let r = resultant(&f, &g, Var::T).unwrap();
        let expect = &(&a * &a) - &(&a * &(&a * &a));
        assert_eq!(r, expect);
    }

    #[test]
    fn resultant_matches_naive_sylvester_determinant() {
        let c = ctx();
        let ring = Ring::new(vec![Var::T, Var::A]);
        let t = Poly::var(&ring, &c, Var::T);
        let a = Poly::var(&ring, &c, Var::A);
        // f = t^3 + A t + 2, g = 2t^2 - A
        let two = Poly::constant(&ring, TowerElem::from_int(&c, 2));
        let f = &(&t.pow(3) + &(&a * &t)) + &two;
        let g = &(&two * &t.pow(2)) - &a;
        let viabareiss = resultant(&f, &g, Var::T).unwrap();
        // build the Sylvester matrix by hand and expand naively
        let fc = f.coeffs_in(Var::T);
        let gc = g.coeffs_in(Var::T);
        let (n, m) = (3usize, 2usize);
        let zero = Poly::zero(&ring, &c);
        let mut mat = vec![vec![zero; n + m]; n + m];
        for i in 0..m {
            for (k, cc) in fc.iter().enumerate() {
                mat[i][i + (n - k)] = cc.clone();
            }
        }
        for i in 0..n {
            for (k, cc) in gc.iter().enumerate() {
                mat[m + i][i + (m - k)] = cc.clone();
            }
        }
        let byhand = naive_det(&mat, &ring, &c);
        assert_eq!(viabareiss, byhand);
    }

    #[test]
    fn gcd_and_squarefree() {
        let c = ctx();
        // gcd(t^4+1, 4t^3) = 1
        let f = tpoly(&c, &[1, 0, 0, 0, 1]);
        let g = tpoly(&c, &[0, 0, 0, 4]);
        let d = gcd_univar(&f, &g, Var::T).unwrap();
        assert_eq!(d.total_degree(), Some(0));
        assert_eq!(squarefree_profile(&f, Var::T).unwrap(), vec![(1, 4)]);
        // 6t^2 + 3t + 3/8 has the double root -1/4
        let mut q = tpoly(&c, &[0, 3, 6]);
        q = &q + &Poly::constant(&tring(), TowerElem::from_ratio(&c, 3, 8));
        assert_eq!(squarefree_profile(&q, Var::T).unwrap(), vec![(2, 1)]);
        let dd = gcd_univar(&q, &q.derivative(Var::T), Var::T).unwrap();
        let coeffs = dd.as_univar(Var::T).unwrap();
        assert_eq!(coeffs.len(), 2);
        assert!(coeffs[1].is_one());
        assert_eq!(coeffs[0], TowerElem::from_ratio(&c, 1, 4));
        // (t-2)^2 (t+1)^3: profile [(2,1),(3,1)]
        let f = {
            let a = tpoly(&c, &[-2, 1]);
            let b = tpoly(&c, &[1, 1]);
            &(&a * &a) * &(&b * &(&b * &b))
        };
        assert_eq!(squarefree_profile(&f, Var::T).unwrap(), vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn substitute_is_ring_hom_spot() {
        let c = ctx();
        let ring = ring_xyz();
        let x = Poly::var(&ring, &c, Var::X);
        let y = Poly::var(&ring, &c, Var::Y);
        let z = Poly::var(&ring, &c, Var::Z);
        let f = &(&x * &x) + &(&y * &z);
        let g = &(&z * &z) - &x;
        let mut map = BTreeMap::new();
        map.insert(Var::X, &y + &z);
        map.insert(Var::Y, &x - &y);
        map.insert(Var::Z, z.clone());
        let fg = &f * &g;
        let lhs = fg.substitute(&map, &ring).unwrap();
        let rhs = &f.substitute(&map, &ring).unwrap() * &g.substitute(&map, &ring).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn roots_quadratic_and_cubic() {
        let c = ctx();
        // t^2 + t - 1: roots (-1 +- sqrt5)/2
        let f = tpoly(&c, &[-1, 1, 1]);
        let (roots, c2) = roots_in_tower(&f, Var::T, FieldPolicy::default()).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            let val = ueval(&f.lift_ctx(&c2).as_univar(Var::T).unwrap(), r);
            assert!(val.is_zero());
        }
        // (t-2)^2
        let f = tpoly(&c, &[4, -4, 1]);
        let (roots, _) = roots_in_tower(&f, Var::T, FieldPolicy::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].1, 2);
        assert_eq!(roots[0].0, TowerElem::from_int(&c, 2));
        // y^2 + b9 y - 1 at b9 = 0: roots 1, -1
        let f = tpoly(&c, &[-1, 0, 1]);
        let (roots, c3) = roots_in_tower(&f, Var::T, FieldPolicy::default()).unwrap();
        assert_eq!(c3.depth(), 0);
        let vals: Vec<_> = roots.iter().map(|(r, _)| r.clone()).collect();
        assert!(vals.contains(&TowerElem::from_int(&c, 1)));
        assert!(vals.contains(&TowerElem::from_int(&c, -1)));
        // rational cubic: (t-1)(t-2)(t-3)
        let f = tpoly(&c, &[-6, 11, -6, 1]);
        let (roots, c4) = roots_in_tower(&f, Var::T, FieldPolicy::default()).unwrap();
        assert_eq!(c4.depth(), 0);
        assert_eq!(roots.len(), 3);
        // irreducible cubic: t^3 - 2 adjoins a cubic level
        let f = tpoly(&c, &[-2, 0, 0, 1]);
        let (roots, c5) = roots_in_tower(&f, Var::T, FieldPolicy::default()).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(c5.has_cubic());
        for (r, _) in &roots {
            let val = ueval(&f.lift_ctx(&c5).as_univar(Var::T).unwrap(), r);
            assert!(val.is_zero());
        }
        // and is refused without the cubic policy
        let err = roots_in_tower(&f, Var::T, FieldPolicy { allow_cubic: false });
        assert!(matches!(err, Err(PolyError::CubicOutsidePolicy)));
    }

    #[test]
    fn gauss_root_search() {
        // (t - (1+i)/2)(t - 3)(t - i) cleared: roots include (1+i)/2
        let half_1i = GaussRat::from_ratio(1, 2, 1, 2);
        let three = GaussRat::from_int(3);
        let i = GaussRat::i();
        // expand (t-a)(t-b)(t-c)
        let a = &half_1i;
        let b = &three;
        let c = &i;
        let c2 = -(a + b + c);
        let c1 = &(a * b) + &(&(a * c) + &(b * c));
        let c0 = -&(&(a * b) * c);
        let coeffs = vec![c0, c1, c2, GaussRat::one()];
        let r = gauss_rational_root(&coeffs).unwrap();
        // any of the three roots is acceptable
        let eval = |x: &GaussRat| {
            let mut acc = GaussRat::zero();
            for g in coeffs.iter().rev() {
                acc = &(&acc * x) + g;
            }
            acc
        };
        assert!(eval(&r).is_zero());
    }

    #[test]
    fn exact_division() {
        let c = ctx();
        let ring = ring_xyz();
        let x = Poly::var(&ring, &c, Var::X);
        let y = Poly::var(&ring, &c, Var::Y);
        let f = &(&x + &y) * &(&x - &y);
        let q = f.exact_div(&(&x + &y)).unwrap();
        assert_eq!(q, &x - &y);
        assert!(f.exact_div(&(&x + &Poly::one(&ring, &c))).is_none());
    }
}
