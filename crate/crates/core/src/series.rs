//! Summands, slash action and truncated lattice sums for the meromorphic
//! Poincaré series `Ψ_{2k,n}` and the harmonic series `ℙ_{2−2k,n}`.

use crate::error::{Error, Result};
use crate::geometry::{
    bottom_rows, elliptic_x, moebius_apply, one_minus_r_squared, r_squared, stabilizer_order, BottomRow,
    UnimodularMatrix, UpperHalfPoint,
};
use crate::num::{CompensatedSum, ComplexSum, Cx, Real};
use crate::special_functions::{beta0_split, cal_c, incomplete_beta_split};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// Meromorphic series of weight `2k`.
    Psi,
    /// Harmonic series of weight `2−2k`.
    P,
}

/// One series `Ψ_{2k,n}` or `ℙ_{2−2k,n}` with base point `𝔷`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec<R> {
    pub kind: SeriesKind,
    pub k: i64,
    pub n: i64,
    pub base: UpperHalfPoint<R>,
}

impl<R: Real> SeriesSpec<R> {
    pub fn new(kind: SeriesKind, k: i64, n: i64, base: UpperHalfPoint<R>) -> Result<Self> {
        check_k(k)?;
        Ok(Self { kind, k, n, base })
    }

    pub fn weight(&self) -> i64 {
        weight(self.kind, self.k)
    }
}

pub fn weight(kind: SeriesKind, k: i64) -> i64 {
    match kind {
        SeriesKind::Psi => 2 * k,
        SeriesKind::P => 2 - 2 * k,
    }
}

fn check_k(k: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("weight parameter k must be >= 2, got {k}")));
    }
    Ok(())
}

/// Lattice-sum bounds and working precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub n_cd: i64,
    pub n_t: i64,
    pub precision_bits: u32,
    /// Worker threads for the block-parallel sum; 0 uses the global pool.
    pub threads: usize,
}

impl Default for TruncationParams {
    fn default() -> Self {
        Self { n_cd: 120, n_t: 120, precision_bits: 128, threads: 0 }
    }
}

impl TruncationParams {
    pub fn with_bounds(n_cd: i64, n_t: i64) -> Self {
        Self { n_cd, n_t, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cd < 1 || self.n_t < 0 {
            return Err(Error::InvalidArgument(format!(
                "truncation needs N_cd >= 1 and N_t >= 0, got {} and {}",
                self.n_cd, self.n_t
            )));
        }
        if self.precision_bits < 53 {
            return Err(Error::InvalidArgument(format!(
                "precision must be at least 53 bits, got {}",
                self.precision_bits
            )));
        }
        Ok(())
    }
}

/// A truncated sum together with the magnitude of its outermost shell.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue<R> {
    pub value: Cx<R>,
    /// `2 Σ |term|` over matrices on the boundary of the enumeration box.
    pub tail_estimate: R,
}

/// `(cz+d)^{−w} f(Mz)`.
pub fn slash<R: Real, F>(f: F, weight: i64, m: &UnimodularMatrix, z: &UpperHalfPoint<R>) -> Result<Cx<R>>
where
    F: Fn(&UpperHalfPoint<R>) -> Result<Cx<R>>,
{
    let j = m.automorphy(z.value());
    Ok(j.powi(-weight) * &f(&moebius_apply(m, z))?)
}

/// Whether the summand of the given series is singular at its base point.
pub fn singular_at_base(kind: SeriesKind, k: i64, n: i64) -> bool {
    match kind {
        SeriesKind::Psi => n < 0,
        SeriesKind::P => n <= 0 || n > 2 * k - 2,
    }
}

fn pole_error<R: Real>(z: &Cx<R>) -> Error {
    Error::Pole(format!("evaluation point {z} hits the base point orbit"))
}

/// `ψ_{2k,n}(z,𝔷) = (z−𝔷̄)^{−2k} X_𝔷(z)ⁿ`.
pub fn psi_summand<R: Real>(k: i64, n: i64, base: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    check_k(k)?;
    let x = elliptic_x(base, z);
    if x == Cx::zero() && n < 0 {
        return Err(pole_error(z.value()));
    }
    let u = z.value() - &base.conj();
    Ok(u.powi(-2 * k) * x.powi(n))
}

/// `φ_{2−2k,n}(z,𝔷) = (z−𝔷̄)^{2k−2} β(1−r²; 2k−1, −n) X_𝔷(z)ⁿ`.
pub fn phi_summand<R: Real>(k: i64, n: i64, base: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    check_k(k)?;
    let x = elliptic_x(base, z);
    if x == Cx::zero() {
        if singular_at_base(SeriesKind::P, k, n) {
            return Err(pole_error(z.value()));
        }
        return Ok(Cx::zero());
    }
    let beta = incomplete_beta_split(&one_minus_r_squared(base, z), &r_squared(base, z), (2 * k - 1) as u32, -n)?;
    let u = z.value() - &base.conj();
    Ok(u.powi(2 * k - 2).scale(&beta) * x.powi(n))
}

/// `2ω_𝔷 ψ_{2k,n}`, the principal part of `Ψ_{2k,n}` at `𝔷` for `n < 0`.
pub fn principal_part_psi<R: Real>(k: i64, n: i64, base: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    if n >= 0 {
        return Err(Error::InvalidArgument(format!("principal part of Psi needs n < 0, got {n}")));
    }
    let omega = stabilizer_order(base) as i64;
    Ok(psi_summand(k, n, base, z)?.scale(&R::from_i64(2 * omega)))
}

/// Principal part of `ℙ_{2−2k,n}` at `𝔷`:
/// `2ω_𝔷 (z−𝔷̄)^{2k−2} Xⁿ` times `β₀(1−r²;2k−1,−n)` for `n > 2k−2`,
/// `β(1−r²;2k−1,−n)` for `0 ≤ n ≤ 2k−2`, and `𝒞_{2k−1,−n}` for `n < 0`.
pub fn principal_part_p<R: Real>(k: i64, n: i64, base: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    check_k(k)?;
    let omega = stabilizer_order(base) as i64;
    let x = elliptic_x(base, z);
    if x == Cx::zero() {
        return Err(pole_error(z.value()));
    }
    let a = (2 * k - 1) as u32;
    let z1 = one_minus_r_squared(base, z);
    let w1 = r_squared(base, z);
    let factor = if n < 0 {
        R::from_rational(&cal_c(a, -n)?)
    } else if n <= 2 * k - 2 {
        incomplete_beta_split(&z1, &w1, a, -n)?
    } else {
        beta0_split(&w1, a, -n)?
    };
    let u = z.value() - &base.conj();
    Ok((u.powi(2 * k - 2) * x.powi(n)).scale(&(factor * R::from_i64(2 * omega))))
}

/// Truncated lattice sum over `enumerate_sl2(N_cd, N_t)`, partitioned into
/// blocks of equal `c` and merged in block order.
#[derive(Clone)]
pub struct LatticeSum {
    trunc: TruncationParams,
    blocks: Arc<Vec<Vec<BottomRow>>>,
    pool: Option<Arc<rayon::ThreadPool>>,
}

struct BlockSum<R> {
    sums: Vec<ComplexSum<R>>,
    tails: Vec<CompensatedSum<R>>,
}

impl LatticeSum {
    pub fn new(trunc: &TruncationParams) -> Result<Self> {
        trunc.validate()?;
        let mut blocks: Vec<Vec<BottomRow>> = vec![Vec::new(); trunc.n_cd as usize + 1];
        for row in bottom_rows(trunc.n_cd) {
            blocks[row.c as usize].push(row);
        }
        let pool = if trunc.threads > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(trunc.threads)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Some(Arc::new(pool))
        } else {
            None
        };
        Ok(Self { trunc: trunc.clone(), blocks: Arc::new(blocks), pool })
    }

    pub fn trunc(&self) -> &TruncationParams {
        &self.trunc
    }

    pub fn eval<R: Real>(&self, spec: &SeriesSpec<R>, z: &UpperHalfPoint<R>) -> Result<SeriesValue<R>> {
        let mut out = self.eval_many(spec.kind, spec.k, &[spec.n], &spec.base, z)?;
        Ok(out.remove(0))
    }

    /// Evaluates the series of one kind for several indices `n` at once,
    /// sharing the lattice geometry.
    pub fn eval_many<R: Real>(
        &self,
        kind: SeriesKind,
        k: i64,
        ns: &[i64],
        base: &UpperHalfPoint<R>,
        z: &UpperHalfPoint<R>,
    ) -> Result<Vec<SeriesValue<R>>> {
        check_k(k)?;
        let bits = R::bits();
        let run = || {
            (0..self.blocks.len())
                .into_par_iter()
                .map(|c| R::with_bits(bits, || self.block(c, kind, k, ns, base, z)))
                .collect::<Vec<_>>()
        };
        let blocks = match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        };
        let mut totals: Vec<ComplexSum<R>> = ns.iter().map(|_| ComplexSum::new()).collect();
        let mut tails: Vec<CompensatedSum<R>> = ns.iter().map(|_| CompensatedSum::new()).collect();
        for block in blocks {
            let block = block?;
            for (i, (s, t)) in block.sums.iter().zip(&block.tails).enumerate() {
                totals[i].add(&s.value());
                tails[i].add(&t.value());
            }
        }
        let two = R::from_i64(2);
        Ok(totals
            .into_iter()
            .zip(tails)
            .map(|(s, t)| SeriesValue { value: s.value().scale(&two), tail_estimate: t.value() * &two })
            .collect())
    }

    fn block<R: Real>(
        &self,
        c: usize,
        kind: SeriesKind,
        k: i64,
        ns: &[i64],
        base: &UpperHalfPoint<R>,
        z: &UpperHalfPoint<R>,
    ) -> Result<BlockSum<R>> {
        let mut sums: Vec<ComplexSum<R>> = ns.iter().map(|_| ComplexSum::new()).collect();
        let mut tails: Vec<CompensatedSum<R>> = ns.iter().map(|_| CompensatedSum::new()).collect();
        let mut terms = vec![Cx::zero(); ns.len()];
        let ctx = TermContext::new(kind, k, ns, base, z);
        let (n_cd, n_t) = (self.trunc.n_cd, self.trunc.n_t);
        for row in &self.blocks[c] {
            let outer_row = row.c.max(row.d.abs()) == n_cd;
            for t in -n_t..=n_t {
                ctx.terms(&row.matrix(t), &mut terms)?;
                for (s, v) in sums.iter_mut().zip(&terms) {
                    s.add(v);
                }
                // outer shell of the box: max(c,|d|) = N_cd or |t| = N_t
                if outer_row || t.abs() == n_t {
                    for (s, v) in tails.iter_mut().zip(&terms) {
                        s.add(&v.abs());
                    }
                }
            }
        }
        Ok(BlockSum { sums, tails })
    }
}

/// Per-evaluation constants for computing slashed summands.
struct TermContext<'a, R> {
    kind: SeriesKind,
    k: i64,
    ns: &'a [i64],
    base: &'a UpperHalfPoint<R>,
    z: &'a UpperHalfPoint<R>,
    base_conj: Cx<R>,
    four_y_eta: R,
    pole_tol_sq: R,
    singular: bool,
    n_min: i64,
}

impl<'a, R: Real> TermContext<'a, R> {
    fn new(kind: SeriesKind, k: i64, ns: &'a [i64], base: &'a UpperHalfPoint<R>, z: &'a UpperHalfPoint<R>) -> Self {
        let tol = R::one().mul_2exp(-(R::bits() as i32) / 4);
        Self {
            kind,
            k,
            ns,
            base,
            z,
            base_conj: base.conj(),
            four_y_eta: R::from_i64(4) * z.y() * base.y(),
            pole_tol_sq: tol.sqr(),
            singular: ns.iter().any(|&n| singular_at_base(kind, k, n)),
            n_min: ns.iter().copied().min().unwrap_or(0),
        }
    }

    /// Slashed summands `f|M(z)` for every requested index, written through
    /// `u = (cz+d)(Mz−𝔷̄)` and `v = (cz+d)(Mz−𝔷)`, so that `X(Mz) = v/u`.
    fn terms(&self, m: &UnimodularMatrix, out: &mut [Cx<R>]) -> Result<()> {
        let zv = self.z.value();
        let j = m.automorphy(zv);
        let az_b = Cx::new(R::from_i64(m.a) * &zv.re + R::from_i64(m.b), R::from_i64(m.a) * &zv.im);
        let u = az_b.clone() - &(j.clone() * &self.base_conj);
        let v = az_b - &(j.clone() * self.base.value());
        let v2 = v.norm_sqr();
        if self.singular && v2 < self.pole_tol_sq.clone() * j.norm_sqr() {
            return Err(pole_error(&moebius_apply(m, self.z).value().clone()));
        }
        let x = v / &u;
        let mut xp = x.powi(self.n_min);
        let mut current = self.n_min;
        let order = sorted_indices(self.ns);
        let u2 = u.norm_sqr();
        match self.kind {
            SeriesKind::Psi => {
                let pre = u.powi(-2 * self.k);
                for &i in &order {
                    let n = self.ns[i];
                    xp = advance(xp, &x, &mut current, n);
                    out[i] = pre.clone() * &xp;
                }
            }
            SeriesKind::P => {
                let pre = u.powi(2 * self.k - 2);
                let zarg = self.four_y_eta.clone() / &u2;
                let warg = v2 / &u2;
                for &i in &order {
                    let n = self.ns[i];
                    xp = advance(xp, &x, &mut current, n);
                    if zarg.is_zero() {
                        out[i] = Cx::zero();
                        continue;
                    }
                    let beta = incomplete_beta_split(&zarg, &warg, (2 * self.k - 1) as u32, -n)?;
                    out[i] = (pre.clone() * &xp).scale(&beta);
                }
            }
        }
        Ok(())
    }
}

fn sorted_indices(ns: &[i64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ns.len()).collect();
    idx.sort_by_key(|&i| ns[i]);
    idx
}

fn advance<R: Real>(mut xp: Cx<R>, x: &Cx<R>, current: &mut i64, target: i64) -> Cx<R> {
    while *current < target {
        xp = xp * x;
        *current += 1;
    }
    xp
}

fn eval_kind<R: Real>(
    expected: SeriesKind,
    spec: &SeriesSpec<R>,
    z: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
) -> Result<SeriesValue<R>> {
    if spec.kind != expected {
        return Err(Error::InvalidArgument(format!("expected a {expected:?} series, got {:?}", spec.kind)));
    }
    LatticeSum::new(trunc)?.eval(spec, z)
}

/// `Ψ_{2k,n}(z) ≈ 2 Σ_M ψ_{2k,n}|_{2k}M(z)` over the truncation box.
pub fn eval_psi<R: Real>(
    spec: &SeriesSpec<R>,
    z: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
) -> Result<SeriesValue<R>> {
    eval_kind(SeriesKind::Psi, spec, z, trunc)
}

/// `ℙ_{2−2k,n}(z) ≈ 2 Σ_M φ_{2−2k,n}|_{2−2k}M(z)` over the truncation box.
pub fn eval_p<R: Real>(
    spec: &SeriesSpec<R>,
    z: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
) -> Result<SeriesValue<R>> {
    eval_kind(SeriesKind::P, spec, z, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> UpperHalfPoint<f64> {
        UpperHalfPoint::from_f64(x, y).unwrap()
    }

    #[test]
    fn summand_examples() {
        let i = p(0.0, 1.0);
        let z = p(0.0, 2.0);
        let v = psi_summand(2, 1, &i, &z).unwrap();
        assert!((v.re - 1.0 / 243.0).abs() < 1e-16 && v.im.abs() < 1e-16);
        assert_eq!(psi_summand(2, 3, &z, &z).unwrap(), Cx::zero());
        assert!(psi_summand(2, -1, &z, &z).is_err());
        // (2iη)^{-2k} at z = 𝔷
        let v = psi_summand(2, 0, &z, &z).unwrap();
        assert!((v.re - 1.0 / 256.0).abs() < 1e-16);
        // (3i)²·β(8/9;3,1)·3 with β(8/9;3,1) = (8/9)³/3
        let v = phi_summand(2, -1, &i, &z).unwrap();
        let expect = -9.0 * (8.0f64 / 9.0).powi(3);
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-14);
        assert_eq!(phi_summand(2, 1, &z, &z).unwrap(), Cx::zero());
        assert!(phi_summand(2, 3, &z, &z).is_err());
    }

    #[test]
    fn slash_identity_and_weight_zero() {
        let z = p(0.2, 0.9);
        let f = |w: &UpperHalfPoint<f64>| Ok(w.value().clone() * w.value());
        assert_eq!(slash(f, 4, &UnimodularMatrix::IDENTITY, &z).unwrap(), f(&z).unwrap());
        let m = UnimodularMatrix::new(2, 1, 1, 1).unwrap();
        assert_eq!(slash(f, 0, &m, &z).unwrap(), f(&moebius_apply(&m, &z)).unwrap());
    }

    #[test]
    fn lattice_terms_match_slashed_summands() {
        let base = p(0.11, 1.31);
        let z = p(0.4, 0.9);
        let ns = [-2, 0, 3];
        for kind in [SeriesKind::Psi, SeriesKind::P] {
            let ctx = TermContext::new(kind, 3, &ns, &base, &z);
            let mut out = vec![Cx::zero(); 3];
            for m in crate::geometry::enumerate_sl2(3, 2).unwrap() {
                ctx.terms(&m, &mut out).unwrap();
                for (i, &n) in ns.iter().enumerate() {
                    let direct = match kind {
                        SeriesKind::Psi => slash(|w| psi_summand(3, n, &base, w), 6, &m, &z),
                        SeriesKind::P => slash(|w| phi_summand(3, n, &base, w), -4, &m, &z),
                    }
                    .unwrap();
                    let rel = (out[i].clone() - &direct).abs() / direct.abs();
                    assert!(rel < 1e-12, "{kind:?} n={n} {m:?} rel={rel}");
                }
            }
        }
    }
}
