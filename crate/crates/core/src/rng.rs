//! Seeded randomness for reproducible draws.
//!
//! SplitMix64 (Steele, Lea, Flood 2014): `state += 0x9E3779B97F4A7C15`, then
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
//! `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`, output `z ^ (z >> 31)`.
//! Bounded draws use `next_u64() % span`. The generator is fixed here so
//! that reports produced from the same seed agree byte for byte across
//! builds and implementations.

use crate::ring::{Ctx, Field, Scalar, Series};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// A random field element: over `Q` a fraction `n/d` with
    /// `n ∈ -9..=9`, `d ∈ 1..=4`; over `F_p` a uniform residue.
    pub fn scalar(&mut self, field: Field) -> Scalar {
        match field {
            Field::Rational => {
                let n = self.range_i64(-9, 9);
                let d = self.range_i64(1, 4);
                Scalar::from_fraction(&n.into(), &d.into(), field).expect("nonzero denominator")
            }
            Field::Prime(p) => Scalar::from_i64((self.next_u64() % p as u64) as i64, field),
        }
    }

    /// Exact polynomial in `x` with random coefficients on `x^min_ord..=x^max_deg`.
    pub fn series(&mut self, ctx: Ctx, min_ord: u32, max_deg: u32) -> Series {
        let mut coeffs = vec![Scalar::zero(ctx.field); min_ord as usize];
        for _ in min_ord..=max_deg {
            coeffs.push(self.scalar(ctx.field));
        }
        Series::from_coeffs(ctx, coeffs, ctx.n_work)
    }
}
