//! Matrix representations of the Dicke Hamiltonian and of the Lindblad
//! Liouvillian with photon leakage,
//!
//! ```text
//! L ρ = -i [H, ρ] + κ (2 a ρ a† - {a†a, ρ}),
//! ```
//!
//! acting on row-major vectorized density matrices (`ρ_{f'f}` at composite
//! index `(f'-1) D_H + f`). [`build_liouvillian`] assembles the superoperator
//! from sparse Kronecker products; [`build_liouvillian_tetradic`] evaluates
//! every tetradic element `L_{g'g,f'f}` one by one and is kept as a reference
//! for small truncations.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::basis::{Basis, FockLabel, ModelParams, Parity};
use crate::error::{Error, Result};
use crate::sparse::SparseComplexMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const NEG_I: Complex64 = Complex64 { re: 0.0, im: -1.0 };

fn check_label(basis: &Basis, label: &FockLabel) -> Result<()> {
    match basis.fock_index(label.n, label.twice_m) {
        Ok(l) if l == *label => Ok(()),
        _ => Err(Error::LabelMismatch(format!(
            "label (n = {}, 2m = {}, f = {}) is not part of the basis j = {}, n_max = {}",
            label.n, label.twice_m, label.f, basis.j, basis.n_max
        ))),
    }
}

/// `C±_m = sqrt(j(j+1) - m(m±1))` from doubled quantum numbers.
fn ladder_coefficient(twice_j: i32, twice_m: i32, raising: bool) -> f64 {
    let shifted = if raising { twice_m + 2 } else { twice_m - 2 };
    let num = twice_j * (twice_j + 2) - twice_m * shifted;
    (f64::from(num) / 4.0).max(0.0).sqrt()
}

/// `<f'|H_D|f>` in closed form.
pub fn hamiltonian_element(bra: &FockLabel, ket: &FockLabel, params: &ModelParams) -> Result<f64> {
    let basis = params.basis();
    check_label(&basis, bra)?;
    check_label(&basis, ket)?;
    Ok(hamiltonian_element_unchecked(bra, ket, params))
}

fn hamiltonian_element_unchecked(bra: &FockLabel, ket: &FockLabel, p: &ModelParams) -> f64 {
    let tj = p.j.twice() as i32;
    let (n1, n) = (bra.n as i64, ket.n as i64);
    let nf = ket.n as f64;
    let norm = f64::from(p.j.num_atoms()).sqrt();
    let mut value = 0.0;
    if n1 == n && bra.twice_m == ket.twice_m {
        value += p.omega * nf + p.omega0 * ket.m_z();
    }
    if bra.twice_m == ket.twice_m + 2 {
        let mut photon = 0.0;
        if n1 == n - 1 {
            photon += p.gamma_minus * nf.sqrt();
        }
        if n1 == n + 1 {
            photon += p.gamma_plus * (nf + 1.0).sqrt();
        }
        value += photon * ladder_coefficient(tj, ket.twice_m, true) / norm;
    }
    if bra.twice_m == ket.twice_m - 2 {
        let mut photon = 0.0;
        if n1 == n + 1 {
            photon += p.gamma_minus * (nf + 1.0).sqrt();
        }
        if n1 == n - 1 {
            photon += p.gamma_plus * nf.sqrt();
        }
        value += photon * ladder_coefficient(tj, ket.twice_m, false) / norm;
    }
    value
}

/// Sparse `D_H × D_H` Hamiltonian; all entries real.
pub fn build_hamiltonian(params: &ModelParams) -> Result<SparseComplexMatrix> {
    params.validate()?;
    let basis = params.basis();
    let mut triplets = Vec::new();
    for ket in basis.labels() {
        for dn in [-1i64, 0, 1] {
            for dm in [-2i32, 0, 2] {
                let n1 = ket.n as i64 + dn;
                if n1 < 0 {
                    continue;
                }
                let Ok(bra) = basis.fock_index(n1 as usize, ket.twice_m + dm) else {
                    continue;
                };
                let v = hamiltonian_element_unchecked(&bra, &ket, params);
                if v != 0.0 {
                    triplets.push((bra.f - 1, ket.f - 1, v));
                }
            }
        }
    }
    Ok(SparseComplexMatrix::from_real_triplets(basis.dim(), triplets))
}

/// Bosonic operators on the truncated Fock ⊗ pseudospin space.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BosonOp {
    /// `a`
    Annihilation,
    /// `a†`
    Creation,
    /// `a†a`
    Number,
    /// `a a†` with diagonal `n + 1`. At `n = n_max` this disagrees with the
    /// product of the truncated `a` and `a†` (which gives `0` there), so the
    /// dissipator never uses it.
    AntiNumber,
}

pub fn boson_element(op: BosonOp, bra: &FockLabel, ket: &FockLabel) -> f64 {
    if bra.twice_m != ket.twice_m {
        return 0.0;
    }
    let n = ket.n as f64;
    match op {
        BosonOp::Annihilation if bra.n + 1 == ket.n => n.sqrt(),
        BosonOp::Creation if bra.n == ket.n + 1 => (n + 1.0).sqrt(),
        BosonOp::Number if bra.n == ket.n => n,
        BosonOp::AntiNumber if bra.n == ket.n => n + 1.0,
        _ => 0.0,
    }
}

pub fn build_boson_op(op: BosonOp, basis: &Basis) -> SparseComplexMatrix {
    let mut triplets = Vec::new();
    for ket in basis.labels() {
        for bra_n in ket.n.saturating_sub(1)..=(ket.n + 1).min(basis.n_max) {
            let bra = basis.fock_index(bra_n, ket.twice_m).expect("valid label");
            let v = boson_element(op, &bra, &ket);
            if v != 0.0 {
                triplets.push((bra.f - 1, ket.f - 1, v));
            }
        }
    }
    SparseComplexMatrix::from_real_triplets(basis.dim(), triplets)
}

/// Liouvillian assembled as
/// `-i (H ⊗ 1 - 1 ⊗ Hᵀ) + κ (2 a ⊗ a* - a†a ⊗ 1 - 1 ⊗ (a†a)ᵀ)`.
pub fn build_liouvillian(params: &ModelParams) -> Result<SparseComplexMatrix> {
    let basis = params.basis();
    let h = build_hamiltonian(params)?;
    let a = build_boson_op(BosonOp::Annihilation, &basis);
    let num = build_boson_op(BosonOp::Number, &basis);
    let id = SparseComplexMatrix::identity(basis.dim());

    let coherent = h.kron(&id).sub(&id.kron(&h.transpose())).scale(NEG_I);
    let jump = a.kron(&a.conj()).scale(Complex64::new(2.0, 0.0));
    let anticomm = num.kron(&id).add(&id.kron(&num.transpose()));
    let dissipator = jump.sub(&anticomm).scale(Complex64::new(params.kappa, 0.0));
    Ok(coherent.add(&dissipator))
}

/// Element-by-element tetradic construction,
///
/// ```text
/// L_{g'g,f'f} = -i(<g'|H|f'> δ_{f,g} - <f|H|g> δ_{g',f'})
///             + κ(2 <g'|a|f'><f|a†|g> - <g'|a†a|f'> δ_{f,g} - <f|a†a|g> δ_{g',f'}).
/// ```
///
/// Cost is `O(D_H⁴)`; intended as a cross-check for small truncations.
pub fn build_liouvillian_tetradic(params: &ModelParams) -> Result<SparseComplexMatrix> {
    params.validate()?;
    let basis = params.basis();
    let d = basis.dim();
    let labels: Vec<FockLabel> = basis.labels().collect();
    let dense = |f: &dyn Fn(&FockLabel, &FockLabel) -> f64| -> Vec<f64> {
        let mut m = vec![0.0; d * d];
        for bra in &labels {
            for ket in &labels {
                m[(bra.f - 1) * d + ket.f - 1] = f(bra, ket);
            }
        }
        m
    };
    let h = dense(&|b, k| hamiltonian_element_unchecked(b, k, params));
    let a = dense(&|b, k| boson_element(BosonOp::Annihilation, b, k));
    let ad = dense(&|b, k| boson_element(BosonOp::Creation, b, k));
    let num = dense(&|b, k| boson_element(BosonOp::Number, b, k));
    let at = |m: &[f64], r: usize, c: usize| m[r * d + c];
    let kappa = params.kappa;

    let mut triplets = Vec::new();
    for g1 in 0..d {
        for g in 0..d {
            let row = g1 * d + g;
            for f1 in 0..d {
                for f in 0..d {
                    let dfg = if f == g { 1.0 } else { 0.0 };
                    let dg1f1 = if g1 == f1 { 1.0 } else { 0.0 };
                    let coherent = at(&h, g1, f1) * dfg - at(&h, f, g) * dg1f1;
                    let diss = 2.0 * at(&a, g1, f1) * at(&ad, f, g)
                        - at(&num, g1, f1) * dfg
                        - at(&num, f, g) * dg1f1;
                    let v = Complex64::new(kappa * diss, -coherent);
                    if v != ZERO {
                        triplets.push((row, f1 * d + f, v));
                    }
                }
            }
        }
    }
    Ok(SparseComplexMatrix::from_triplets(d * d, triplets, 0.0))
}

/// Liouville indices belonging to one parity sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorMap {
    pub sector: Parity,
    /// 1-based composite indices, strictly increasing.
    pub global_indices: Vec<usize>,
}

impl SectorMap {
    pub fn new(basis: &Basis, sector: Parity) -> Self {
        let global_indices = (1..=basis.liouville_dim())
            .filter(|&i| {
                let l = basis.liouville_unindex(i).expect("index in range");
                basis.liouville_parity(&l) == sector
            })
            .collect();
        SectorMap { sector, global_indices }
    }

    pub fn len(&self) -> usize {
        self.global_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global_indices.is_empty()
    }
}

/// Restricts `l` to one parity sector. Fails if `l` couples the two sectors.
pub fn project_sector(
    l: &SparseComplexMatrix,
    basis: &Basis,
    sector: Parity,
) -> Result<(SparseComplexMatrix, SectorMap)> {
    if l.dim() != basis.liouville_dim() {
        return Err(Error::LabelMismatch(format!(
            "matrix dimension {} does not match D_L = {}",
            l.dim(),
            basis.liouville_dim()
        )));
    }
    let parity: Vec<Parity> = (1..=l.dim())
        .map(|i| basis.liouville_parity(&basis.liouville_unindex(i).expect("in range")))
        .collect();
    let map = SectorMap::new(basis, sector);
    let mut local = vec![usize::MAX; l.dim()];
    for (k, &g) in map.global_indices.iter().enumerate() {
        local[g - 1] = k;
    }
    let mut triplets = Vec::new();
    for &(r, c, v) in l.entries() {
        if parity[r] != parity[c] {
            return Err(Error::CrossSectorEntry { row: r + 1, col: c + 1, magnitude: v.norm() });
        }
        if parity[r] == sector {
            triplets.push((local[r], local[c], v));
        }
    }
    Ok((SparseComplexMatrix::from_triplets(map.len(), triplets, 0.0), map))
}

/// Real sparse matrix produced by [`hermitian_real_form`].
#[derive(Clone, Debug, PartialEq)]
pub struct RealSectorMatrix {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
    /// Largest imaginary part discarded during the change of basis.
    pub imag_residual: f64,
}

impl RealSectorMatrix {
    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::<f64>::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }
}

/// Rewrites a sector block in the basis of Hermitian and anti-Hermitian
/// combinations of projectors,
/// `(|f'><f| + |f><f'|)/√2`, `i(|f'><f| - |f><f'|)/√2` for `f' < f` and
/// `|f><f|`. A Hermiticity-preserving superoperator is real in this basis
/// and keeps its spectrum, so the eigensolve can run in real arithmetic.
pub fn hermitian_real_form(
    block: &SparseComplexMatrix,
    map: &SectorMap,
    basis: &Basis,
) -> Result<RealSectorMatrix> {
    let d = basis.dim();
    let n = map.len();
    if block.dim() != n {
        return Err(Error::LabelMismatch("block does not match its sector map".into()));
    }
    let mut position = std::collections::HashMap::with_capacity(n);
    for (k, &g) in map.global_indices.iter().enumerate() {
        position.insert(g, k);
    }
    // column k of T: list of (real coordinate, T[coord][k])
    let mut t_cols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    let mut next = 0usize;
    let s = FRAC_1_SQRT_2;
    for (k, &g) in map.global_indices.iter().enumerate() {
        let bra = (g - 1) / d;
        let ket = (g - 1) % d;
        if bra == ket {
            t_cols[k].push((next, Complex64::new(1.0, 0.0)));
            next += 1;
        } else if bra < ket {
            let partner = ket * d + bra + 1;
            let kp = *position.get(&partner).ok_or_else(|| {
                Error::LabelMismatch(format!("partner of index {g} lies outside the sector"))
            })?;
            t_cols[k].push((next, Complex64::new(s, 0.0)));
            t_cols[kp].push((next, Complex64::new(s, 0.0)));
            t_cols[k].push((next + 1, Complex64::new(0.0, s)));
            t_cols[kp].push((next + 1, Complex64::new(0.0, -s)));
            next += 2;
        }
    }
    debug_assert_eq!(next, n);

    let mut acc: Vec<(usize, usize, Complex64)> = Vec::with_capacity(block.nnz() * 4);
    for &(r, c, v) in block.entries() {
        for &(a, tar) in &t_cols[r] {
            for &(b, tbc) in &t_cols[c] {
                acc.push((a, b, tar * v * tbc.conj()));
            }
        }
    }
    acc.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut entries = Vec::with_capacity(acc.len());
    let mut imag_residual: f64 = 0.0;
    let mut iter = acc.into_iter().peekable();
    while let Some((r, c, mut v)) = iter.next() {
        while let Some(&(r2, c2, v2)) = iter.peek() {
            if (r2, c2) != (r, c) {
                break;
            }
            v += v2;
            iter.next();
        }
        imag_residual = imag_residual.max(v.im.abs());
        if v.re != 0.0 {
            entries.push((r, c, v.re));
        }
    }
    Ok(RealSectorMatrix { dim: n, entries, imag_residual })
}

/// `vᵀ L` for the trace functional `v` (ones on diagonal labels). Vanishes
/// for any trace-preserving generator.
pub fn trace_functional_residual(l: &SparseComplexMatrix, basis: &Basis) -> Vec<Complex64> {
    let d = basis.dim();
    let mut v = vec![ZERO; l.dim()];
    for f in 0..d {
        v[f * d + f] = Complex64::new(1.0, 0.0);
    }
    l.vecmat(&v)
}
