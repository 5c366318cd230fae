//! The 64 canonical representatives and the parametric family shapes.

use crate::field::{GaussRat, Tower, TowerElem};
use crate::maps::QuadMap;

pub const REP_IDS: std::ops::RangeInclusive<u8> = 1..=64;

/// F_k in the classification list's printed form.
/// Monomial order: x^2, xy, xz, y^2, yz, z^2, x, y, z, 1.
pub fn canonical_representative(k: u8) -> QuadMap {
    let ctx = Tower::base();
    let m = |f: [i64; 10], g: [i64; 10]| QuadMap::from_ints(&ctx, f, g);
    match k {
        1 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 1, 0, 1, 2, 0, 2, 0]),
        2 => {
            // (x^2+z^2+y, y^2+z^2+4x+iz)
            let mut q = m([1, 0, 0, 0, 0, 1, 0, 1, 0, 0], [0, 0, 0, 1, 0, 1, 4, 0, 0, 0]);
            q.g[8] = TowerElem::i(&ctx);
            q
        }
        3 => m([1, 0, 0, 0, 0, 1, 0, 1, 0, 0], [0, 0, 0, 1, 0, 1, 1, 0, 2, 0]),
        4 => m([1, 0, 0, 0, 0, 1, 0, 1, 0, 0], [0, 0, 0, 1, 0, 1, 2, 0, 0, 0]),
        5 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 1, 0, 1, 2, 0, 0, 0]),
        6 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 1, 0, 1, 0, 0, 0, 0]),
        7 => m([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 1, 0, 0, 0, 0]),
        8 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 0, 1, 0, 1, 0, 0, 0]),
        9 => {
            // A = sqrt(2) (1+i)
            let two = TowerElem::from_int(&ctx, 2);
            let (s2, c2) = two.sqrt().expect("sqrt(2)");
            let a = &s2 * &TowerElem::from_gauss(&c2, GaussRat::from_ratio(1, 1, 1, 1));
            let mut q = QuadMap::from_ints(
                &c2,
                [1, 0, 0, 0, 0, 1, 0, 2, 0, 0],
                [0, 0, 0, 0, 1, 0, 1, 0, 0, 0],
            );
            q.g[7] = a;
            q
        }
        10 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 0, 1, 0, 0, 1, 0, 0]),
        11 => m([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 1, 1, 0, 0]),
        12 => m([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 1, 0, 0]),
        13 => m([1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
        14 => m([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 1, 0, 0, 0]),
        15 => m([1, 0, 0, 0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
        16 => m([1, 0, 0, 1, 0, 0, 0, 0, 2, 0], [0, 0, 0, 0, 0, 1, 2, 0, 0, 0]),
        17 => m([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 2, 0, 0, 0]),
        18 => m([0, 1, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1, 2, 0, 0, 0]),
        19 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 2, 0, 0, 0]),
        20 => m([1, 0, 0, 1, 0, 0, 0, 0, 2, 0], [0, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
        21 => m([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
        22 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 0, 0, 2, 0]),
        23 => {
            // (x^2+2yz, y^2+2xy+3y/8+2z)
            let mut q = m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 0, 0, 2, 0]);
            q.g[7] = TowerElem::from_ratio(&ctx, 3, 8);
            q
        }
        24 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 2, 0, 0, 0]),
        25 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 0, 2, 0, 0]),
        26 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 2, 0, 1, 0, 0, 0, 0, 0, 0]),
        27 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 2, 0, 0]),
        28 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 2, 0, 0, 0]),
        29 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0, 2, 0]),
        30 => m([1, 0, 0, 0, 2, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0, 0, 0]),
        31 => m([1, 0, 0, 0, 0, 0, 0, 0, 2, 0], [0, 0, 0, 1, 0, 0, 0, 0, 2, 0]),
        32 => m([1, 0, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0, 1, 0, 0, 0]),
        33 => m([1, 0, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        34 => m([1, 0, 0, 0, 0, 0, 0, 2, 0, 0], [0, 0, 0, 1, 0, 0, 2, 0, 0, 0]),
        35 => m([1, 0, 0, 0, 0, 0, 0, 2, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        36 => m([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        37 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 1, 0]),
        38 => m([0, 1, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
        39 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
        40 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 2, 0]),
        41 => m([0, 1, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0, 1, 0, 0, 0]),
        42 => m([0, 1, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        43 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 2, 0, 0, 0]),
        44 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 2, 0, 0]),
        45 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        46 => m([1, 0, 0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        47 => m([1, 0, 0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
        48 => m([1, 0, 0, 1, 0, 1, 0, 0, 0, 0], [0; 10]),
        49 => m([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 0, 1, 0]),
        50 => m([1, 0, 0, 1, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        51 => m([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        52 => m([0, 1, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        53 => m([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        54 => m([1, 0, 0, 1, 0, 0, 0, 0, 1, 0], [0; 10]),
        55 => m([1, 0, 0, 1, 0, 0, 0, 0, 0, 0], [0; 10]),
        56 => m([1, 0, 0, 0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
        57 => m([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
        58 => m([1, 0, 0, 0, 0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        59 => m([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0, 0, 0]),
        60 => m([1, 0, 0, 0, 0, 0, 0, 1, 0, 0], [0; 10]),
        61 => m([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0; 10]),
        62 => m([0, 0, 0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
        63 => m([0, 0, 0, 0, 0, 0, 1, 0, 0, 0], [0; 10]),
        64 => m([0; 10], [0; 10]),
        _ => panic!("representative index out of range: {k}"),
    }
}

/// (x^2 + B z^2 + 2A y, A y^2 + B z^2 + 2x + 2B z): the reduced shape of the
/// generic family; F_1 is the member at (A, B) = (1, 1).
pub fn family_gen1a(a: &TowerElem, b: &TowerElem) -> QuadMap {
    let ctx = crate::poly::join_ctx(a.ctx(), b.ctx()).expect("towers");
    let a = a.lift_to(&ctx).unwrap();
    let b = b.lift_to(&ctx).unwrap();
    let mut q = QuadMap::zero(&ctx);
    let one = TowerElem::one(&ctx);
    let two = TowerElem::from_int(&ctx, 2);
    q.f[0] = one.clone(); // x^2
    q.f[5] = b.clone(); // B z^2
    q.f[7] = &two * &a; // 2A y
    q.g[3] = a.clone(); // A y^2
    q.g[5] = b.clone(); // B z^2
    q.g[6] = two.clone(); // 2x
    q.g[8] = &two * &b; // 2B z
    q
}

/// (x^2 + z^2 + 2A y, A y^2 + z^2 + 2x): F_5 is the member at A = 1.
pub fn family_gen2(a: &TowerElem) -> QuadMap {
    let ctx = a.ctx().clone();
    let mut q = QuadMap::zero(&ctx);
    let one = TowerElem::one(&ctx);
    let two = TowerElem::from_int(&ctx, 2);
    q.f[0] = one.clone();
    q.f[5] = one.clone();
    q.f[7] = &two * a;
    q.g[3] = a.clone();
    q.g[5] = one.clone();
    q.g[6] = two;
    q
}

/// (x^2 + z^2 + 2y, yz + x + A y): F_8 is the member at A = 0.
pub fn family_gen5(a: &TowerElem) -> QuadMap {
    let ctx = a.ctx().clone();
    let mut q = QuadMap::zero(&ctx);
    let one = TowerElem::one(&ctx);
    q.f[0] = one.clone();
    q.f[5] = one.clone();
    q.f[7] = TowerElem::from_int(&ctx, 2);
    q.g[4] = one.clone();
    q.g[6] = one;
    q.g[7] = a.clone();
    q
}
