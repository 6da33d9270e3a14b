//! The weight-graded cyclic bar complex of the pointed monoid
//! `Π_k = {0, 1, x, ..., x^{k-1}}` with `x^k = 0`.
//!
//! A degree-`r` cell of weight `i` is a word `(a_0; a_1, ..., a_r)` of
//! exponents with `a_0 ∈ {0, ..., k-1}` (0 encodes the monoid unit) and
//! `a_s ∈ {1, ..., k-1}` for `s ≥ 1`, summing to `i`. Degeneracies insert the
//! unit at positions `1..r+1` only, so the leading letter may be the unit and
//! these words are exactly the nondegenerate basis. Faces multiply adjacent
//! letters, the last face rotating the final letter into position 0; products
//! that overflow `x^k` hit the basepoint and the term is dropped.
//!
//! Homology is computed by Smith normal form on kernel presentations. The
//! chain-level power map scales every exponent by `n`; its effect on the
//! odd-degree torsion class is also verified through an explicit cocycle
//! certificate that scales to complexes far too large for matrix reduction.

use crate::abgroup::{AbGroupPresentation, GroupMap, GroupOrder, InvariantFactors};
use crate::matrix::{hnf_basis, hnf_solve, hnf_solve_matrix, snf, IntMatrix};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A nondegenerate basis word `(a_0; a_1, ..., a_r)` stored as exponents;
/// `letters[0]` may be 0 (the unit), all later letters are in `[1, k-1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<u32>,
}

impl CyclicWord {
    pub fn new(k: u32, letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Usage("a cyclic word needs at least the leading letter".into()));
        }
        if letters[0] >= k || letters[1..].iter().any(|&a| a == 0 || a >= k) {
            return Err(Error::Usage(format!(
                "letters {letters:?} are not exponents of nondegenerate cells for k = {k}"
            )));
        }
        Ok(CyclicWord { letters })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len() - 1
    }

    pub fn weight(&self) -> u32 {
        self.letters.iter().sum()
    }

    /// Exponent scaling `a ↦ a^n`, the chain-level power map on cells.
    pub fn scaled(&self, n: u32) -> CyclicWord {
        CyclicWord { letters: self.letters.iter().map(|&a| a * n).collect() }
    }

    /// The `s`-th face, `0 ≤ s ≤ degree`; `None` when the merged exponent
    /// overflows to the basepoint.
    pub fn face(&self, k: u32, s: usize) -> Option<CyclicWord> {
        let mut out = Vec::with_capacity(self.letters.len() - 1);
        if face_into(&self.letters, k, s, &mut out) {
            Some(CyclicWord { letters: out })
        } else {
            None
        }
    }
}

/// Raw face computation into a scratch buffer; returns false on basepoint.
fn face_into(letters: &[u32], k: u32, s: usize, out: &mut Vec<u32>) -> bool {
    let r = letters.len() - 1;
    out.clear();
    if s < r {
        let merged = letters[s] + letters[s + 1];
        if merged >= k {
            return false;
        }
        out.extend_from_slice(&letters[..s]);
        out.push(merged);
        out.extend_from_slice(&letters[s + 2..]);
    } else {
        // rotating last face: a_r merges into a_0
        let merged = letters[0] + letters[r];
        if merged >= k {
            return false;
        }
        out.push(merged);
        out.extend_from_slice(&letters[1..r]);
    }
    true
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = |a: u32| match a {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{a}"),
        };
        write!(f, "({})", self.letters.iter().map(|&a| letter(a)).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of compositions of `total` into exactly `parts` parts in `[1, max_part]`.
fn compositions(total: u64, parts: u64, max_part: u64) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    if total < parts || total > parts.saturating_mul(max_part) {
        return 0;
    }
    // dp over the number of parts
    let mut dp = vec![0u128; (total + 1) as usize];
    dp[0] = 1;
    for _ in 0..parts {
        let mut next = vec![0u128; (total + 1) as usize];
        for t in 0..=total as usize {
            if dp[t] == 0 {
                continue;
            }
            for a in 1..=max_part as usize {
                if t + a > total as usize {
                    break;
                }
                next[t + a] += dp[t];
            }
        }
        dp = next;
    }
    dp[total as usize]
}

/// Number of degree-`r` cells of `chain_complex(k, i)` without enumeration.
pub fn count_cells(k: u32, i: u32, r: usize) -> u128 {
    let b = (k - 1) as u64;
    compositions(i as u64, r as u64 + 1, b) + compositions(i as u64, r as u64, b)
}

pub fn total_cells(k: u32, i: u32) -> u128 {
    (0..=i as usize).map(|r| count_cells(k, i, r)).sum()
}

/// Stream the degree-`r` cells in lexicographic order without materializing
/// them; the callback receives the exponent word.
pub fn for_each_cell(k: u32, i: u32, r: usize, mut f: impl FnMut(&[u32])) {
    fn rec(buffer: &mut Vec<u32>, rem: u32, slots: u32, b: u32, f: &mut impl FnMut(&[u32])) {
        if slots == 0 {
            if rem == 0 {
                f(buffer);
            }
            return;
        }
        if rem < slots || rem > b * slots {
            return;
        }
        let lo = if rem > b * (slots - 1) { rem - b * (slots - 1) } else { 1 };
        let hi = b.min(rem - (slots - 1));
        for a in lo..=hi {
            buffer.push(a);
            rec(buffer, rem - a, slots - 1, b, f);
            buffer.pop();
        }
    }
    if k < 2 || i < 1 {
        return;
    }
    let b = k - 1;
    let mut buffer = Vec::with_capacity(r + 1);
    for a0 in 0..=b.min(i) {
        if a0 == 0 && r == 0 {
            continue; // the weight-0 basepoint component is not modeled
        }
        if r == 0 {
            if a0 == i {
                buffer.push(a0);
                f(&buffer);
                buffer.pop();
            }
            continue;
        }
        buffer.push(a0);
        rec(&mut buffer, i - a0, r as u32, b, &mut f);
        buffer.pop();
    }
}

/// Per-degree nondegenerate cell bases of weight `i`.
pub fn cells(k: u32, i: u32) -> Result<Vec<Vec<CyclicWord>>> {
    if k < 2 || i < 1 {
        return Err(Error::Usage("cells requires k >= 2 and i >= 1".into()));
    }
    let mut out = Vec::with_capacity(i as usize + 1);
    for r in 0..=i as usize {
        let mut level = Vec::new();
        for_each_cell(k, i, r, |letters| {
            level.push(CyclicWord { letters: letters.to_vec() });
        });
        out.push(level);
    }
    Ok(out)
}

/// Alternating sum of cell counts; zero for every positive weight.
pub fn euler_check(k: u32, i: u32) -> Result<i128> {
    if k < 2 || i < 1 {
        return Err(Error::Usage("euler_check requires k >= 2 and i >= 1".into()));
    }
    let mut sum: i128 = 0;
    for r in 0..=i as usize {
        let c = count_cells(k, i, r) as i128;
        sum += if r % 2 == 0 { c } else { -c };
    }
    Ok(sum)
}

/// A formal integer combination of cells in one degree.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Chain {
    terms: BTreeMap<CyclicWord, BigInt>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn from_word(w: CyclicWord, coeff: BigInt) -> Self {
        let mut c = Chain::zero();
        c.add_term(w, coeff);
        c
    }

    pub fn add_term(&mut self, w: CyclicWord, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CyclicWord, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_words(&self, mut f: impl FnMut(&CyclicWord) -> CyclicWord) -> Chain {
        let mut out = Chain::zero();
        for (w, v) in &self.terms {
            out.add_term(f(w), v.clone());
        }
        out
    }

    /// Boundary `Σ_s (-1)^s d_s` with basepoint terms dropped.
    pub fn boundary(&self, k: u32) -> Chain {
        let mut out = Chain::zero();
        for (w, v) in &self.terms {
            for s in 0..=w.degree() {
                if let Some(face) = w.face(k, s) {
                    let signed = if s % 2 == 0 { v.clone() } else { -v.clone() };
                    out.add_term(face, signed);
                }
            }
        }
        out
    }
}

/// The integral chain complex of weight-`i` cells; `boundaries[r]` is the
/// matrix of `∂_r : C_r → C_{r-1}` over the cell bases.
pub struct ChainComplex {
    k: u32,
    weight: u32,
    cells: Vec<Vec<CyclicWord>>,
    index: Vec<HashMap<CyclicWord, usize>>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn new(k: u32, i: u32) -> Result<Self> {
        let cells = cells(k, i)?;
        let index: Vec<HashMap<CyclicWord, usize>> = cells
            .iter()
            .map(|level| level.iter().enumerate().map(|(idx, w)| (w.clone(), idx)).collect())
            .collect();
        let mut boundaries = Vec::with_capacity(cells.len());
        boundaries.push(IntMatrix::zero(0, cells[0].len()));
        for r in 1..cells.len() {
            let mut m = IntMatrix::zero(cells[r - 1].len(), cells[r].len());
            for (col, w) in cells[r].iter().enumerate() {
                for s in 0..=r {
                    if let Some(face) = w.face(k, s) {
                        let row = index[r - 1][&face];
                        let delta = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        m[(row, col)] += delta;
                    }
                }
            }
            boundaries.push(m);
        }
        Ok(ChainComplex { k, weight: i, cells, index, boundaries })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn max_degree(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells_in(&self, r: usize) -> &[CyclicWord] {
        self.cells.get(r).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, r: usize) -> usize {
        self.cells_in(r).len()
    }

    pub fn boundary(&self, r: usize) -> &IntMatrix {
        &self.boundaries[r]
    }

    pub fn index_of(&self, r: usize, w: &CyclicWord) -> Option<usize> {
        self.index.get(r).and_then(|m| m.get(w).copied())
    }

    pub fn dd_is_zero(&self) -> bool {
        (2..=self.max_degree()).all(|r| self.boundaries[r - 1].mul(&self.boundaries[r]).is_zero())
    }

    pub fn chain_to_vec(&self, r: usize, chain: &Chain) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.dim(r)];
        for (w, c) in chain.terms() {
            let idx = self.index_of(r, w)?;
            v[idx] = c.clone();
        }
        Some(v)
    }

    pub fn vec_to_chain(&self, r: usize, v: &[BigInt]) -> Chain {
        let mut chain = Chain::zero();
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                chain.add_term(self.cells[r][idx].clone(), c.clone());
            }
        }
        chain
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologySummary {
    pub degree: usize,
    pub factors: InvariantFactors,
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{} = {}", self.degree, self.factors)
    }
}

struct DegreeHomology {
    /// Canonical Hermite basis of `ker ∂_r`; all class computations solve
    /// against it by forward substitution.
    kernel: IntMatrix,
    presentation: AbGroupPresentation,
}

/// Kernel presentations of the homology in every degree: `H_r` is presented
/// on a saturated basis of `ker ∂_r`, with relations expressing `im ∂_{r+1}`
/// in that basis.
pub struct HomologyData {
    complex: ChainComplex,
    degrees: Vec<DegreeHomology>,
}

impl HomologyData {
    pub fn new(complex: ChainComplex) -> Self {
        let max = complex.max_degree();
        let mut degrees = Vec::with_capacity(max + 1);
        for r in 0..=max {
            let kernel = hnf_basis(&snf(complex.boundary(r)).kernel_basis());
            let next_boundary = if r < max {
                complex.boundary(r + 1).clone()
            } else {
                IntMatrix::zero(complex.dim(r), 0)
            };
            let relations = hnf_solve_matrix(&kernel, &next_boundary)
                .expect("boundaries are cycles: dd = 0");
            let presentation = AbGroupPresentation::new(kernel.ncols(), relations)
                .expect("rank matches by construction");
            degrees.push(DegreeHomology { kernel, presentation });
        }
        HomologyData { complex, degrees }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn presentation(&self, r: usize) -> &AbGroupPresentation {
        &self.degrees[r].presentation
    }

    pub fn kernel_basis(&self, r: usize) -> &IntMatrix {
        &self.degrees[r].kernel
    }

    /// Coordinates of a cycle in the kernel basis of degree `r`.
    pub fn class_of(&self, r: usize, cycle: &[BigInt]) -> Option<Vec<BigInt>> {
        hnf_solve(&self.degrees[r].kernel, cycle)
    }

    pub fn class_of_chain(&self, r: usize, chain: &Chain) -> Option<Vec<BigInt>> {
        self.class_of(r, &self.complex.chain_to_vec(r, chain)?)
    }

    /// Nontrivial homology groups, ascending by degree.
    pub fn summaries(&self) -> Vec<HomologySummary> {
        self.degrees
            .iter()
            .enumerate()
            .map(|(degree, d)| HomologySummary {
                degree,
                factors: d.presentation.invariant_factors(),
            })
            .filter(|s| !s.factors.is_trivial())
            .collect()
    }
}

/// SNF-based reduced integral homology, nontrivial degrees only.
pub fn homology(k: u32, i: u32) -> Result<Vec<HomologySummary>> {
    Ok(HomologyData::new(ChainComplex::new(k, i)?).summaries())
}

/// The homology predicted by the mapping-cone description: with
/// `d = ⌊(i-1)/k⌋`, free classes in degrees `2d` and `2d+1` when `k ∤ i`, and
/// a single `Z/k` in degree `2d+1` when `k | i` (the covering projection has
/// degree `k` on the top class).
pub fn predicted_homology(k: u32, i: u32) -> Result<Vec<HomologySummary>> {
    if k < 2 || i < 1 {
        return Err(Error::Usage("predicted_homology requires k >= 2 and i >= 1".into()));
    }
    let d = ((i - 1) / k) as usize;
    if i.is_multiple_of(k) {
        Ok(vec![HomologySummary {
            degree: 2 * d + 1,
            factors: InvariantFactors { torsion: vec![BigUint::from(k)], free_rank: 0 },
        }])
    } else {
        let free = |degree| HomologySummary {
            degree,
            factors: InvariantFactors { torsion: vec![], free_rank: 1 },
        };
        Ok(vec![free(2 * d), free(2 * d + 1)])
    }
}

pub fn homology_json(k: u32, i: u32, summaries: &[HomologySummary], euler: i128) -> Value {
    let cell_counts: Vec<Value> =
        (0..=i as usize).map(|r| json!(count_cells(k, i, r) as u64)).collect();
    json!({
        "k": k,
        "i": i,
        "cells": cell_counts,
        "homology": summaries.iter().map(|s| {
            let mut factors: Vec<Value> =
                s.factors.torsion.iter().map(crate::abgroup::biguint_json).collect();
            factors.extend(std::iter::repeat_n(json!(0), s.factors.free_rank));
            json!({ "degree": s.degree, "factors": factors })
        }).collect::<Vec<_>>(),
        "euler": euler as i64,
    })
}

/// The chain-level power map `(a_0; ...) ↦ (n a_0; ...)` from weight `i` over
/// `Π_k` to weight `ni` over `Π_nk`, with its induced maps on homology
/// computed through the kernel presentations.
pub struct InducedPowerMap {
    pub n: u32,
    pub source: HomologyData,
    pub target: HomologyData,
    /// One map per source degree.
    pub maps: Vec<GroupMap>,
}

/// Exponent scaling commutes with faces on every cell: overflow happens in
/// the source iff it happens in the target because `a + b ≥ k ⟺ na + nb ≥ nk`.
/// Verified cell by cell.
pub fn power_map_commutes(k: u32, i: u32, n: u32) -> Result<bool> {
    if k < 2 || i < 1 || n < 1 {
        return Err(Error::Usage("power map requires k >= 2, i >= 1, n >= 1".into()));
    }
    let complex = ChainComplex::new(k, i)?;
    for r in 0..=complex.max_degree() {
        for w in complex.cells_in(r) {
            let one = Chain::from_word(w.clone(), BigInt::one());
            let lhs = one.map_words(|c| c.scaled(n)).boundary(n * k);
            let rhs = one.boundary(k).map_words(|c| c.scaled(n));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Full matrix route for the induced homology maps; refuses targets larger
/// than `max_cells` total cells (the certificate route has no such limit).
pub fn power_map_induced(k: u32, i: u32, n: u32, max_cells: u128) -> Result<InducedPowerMap> {
    if k < 2 || i < 1 || n < 1 {
        return Err(Error::Usage("power map requires k >= 2, i >= 1, n >= 1".into()));
    }
    let target_size = total_cells(n * k, n * i);
    if target_size > max_cells {
        return Err(Error::Resource(format!(
            "target complex has {target_size} cells, above the matrix-route bound {max_cells}"
        )));
    }
    let source = HomologyData::new(ChainComplex::new(k, i)?);
    let target = HomologyData::new(ChainComplex::new(n * k, n * i)?);

    assert!(
        power_map_commutes(k, i, n)?,
        "exponent scaling must commute with the boundary"
    );

    let mut maps = Vec::new();
    for r in 0..=source.complex.max_degree() {
        let mut f = IntMatrix::zero(target.complex.dim(r), source.complex.dim(r));
        for (col, w) in source.complex.cells_in(r).iter().enumerate() {
            let row = target
                .complex
                .index_of(r, &w.scaled(n))
                .expect("scaled cells are cells of the target");
            f[(row, col)] = BigInt::one();
        }
        let mapped_kernel = f.mul(source.kernel_basis(r));
        let in_target_coords = hnf_solve_matrix(&target.degrees[r].kernel, &mapped_kernel)
            .expect("a chain map sends cycles to cycles");
        let map =
            GroupMap::induced(in_target_coords, source.presentation(r), target.presentation(r))
                .expect("a chain map sends boundaries to boundaries");
        maps.push(map);
    }
    Ok(InducedPowerMap { n, source, target, maps })
}

/// Value of the detecting cocycle on an even-length word `(a_0; ..., a_{2m+1})`:
/// the last letter when every interior pair `(a_{2i-1}, a_{2i})` carries over
/// (`a_{2i-1} + a_{2i} ≥ k`), and zero otherwise, mod `k`.
pub fn torsion_cocycle_value(k: u32, letters: &[u32]) -> u64 {
    debug_assert!(letters.len() >= 2 && letters.len().is_multiple_of(2));
    let m = (letters.len() - 2) / 2;
    for pair in 1..=m {
        if letters[2 * pair - 1] + letters[2 * pair] < k {
            return 0;
        }
    }
    u64::from(*letters.last().expect("nonempty")) % u64::from(k)
}

/// The alternating word `(x; x^{k-1}, x, x^{k-1}, ..., x, x^{k-1})` of degree
/// `2d+1` and weight `(d+1)k`. Every face overflows, so it is a cycle, and
/// the cocycle evaluates to `k - 1` on it.
pub fn fundamental_torsion_cycle(k: u32, d: u32) -> CyclicWord {
    let mut letters = Vec::with_capacity(2 * d as usize + 2);
    letters.push(1);
    for idx in 1..=(2 * d + 1) as usize {
        letters.push(if idx % 2 == 1 { k - 1 } else { 1 });
    }
    CyclicWord { letters }
}

/// Exhaustively verify that the cocycle kills every boundary from degree
/// `2d+2` at weight `(d+1)k`, streaming the cells without storing them.
pub fn verify_torsion_cocycle(k: u32, d: u32) -> bool {
    let i = (d + 1) * k;
    let deg = 2 * d as usize + 2;
    let modulus = i64::from(k);
    let mut ok = true;
    let mut scratch: Vec<u32> = Vec::new();
    for_each_cell(k, i, deg, |letters| {
        if !ok {
            return;
        }
        let mut sum: i64 = 0;
        for s in 0..=deg {
            if face_into(letters, k, s, &mut scratch) {
                let value = torsion_cocycle_value(k, &scratch) as i64;
                sum += if s % 2 == 0 { value } else { -value };
            }
        }
        if sum.rem_euclid(modulus) != 0 {
            ok = false;
        }
    });
    ok
}

/// Certificate-based verification that the power map is injective
/// `Z/k → Z/nk` on the degree-`(2d+1)` torsion class, for `k | i`.
///
/// The protocol needs no linear algebra in the target:
/// * the source group and a generator cycle `w` come from the small source
///   complex via SNF;
/// * an explicit chain `y` with `∂y = k·w` is found in the source and pushed
///   through the power map, certifying `k·[g(w)] = 0` in the target;
/// * the detecting cocycle is checked against every boundary of the target
///   degree by streaming enumeration, and its value on `g(w)` bounds the
///   order of the class from below.
///
/// Together these pin the order of `[g(w)]` to exactly `k`. The cokernel
/// order additionally uses the target group order `nk`, which is re-derived
/// by Smith normal form whenever the target is small enough and otherwise
/// comes from the mapping-cone prediction.
#[derive(Clone, Debug)]
pub struct TorsionPowerReport {
    pub k: u32,
    pub i: u32,
    pub n: u32,
    pub degree: usize,
    pub source_is_cyclic_of_order_k: bool,
    pub source_generator_order_ok: bool,
    pub chain_map_commutes: bool,
    pub boundary_certificate_ok: bool,
    pub target_cocycle_ok: bool,
    pub target_generator_value_ok: bool,
    /// Cocycle value on the image of the source generator, mod `nk`.
    pub lambda: u64,
    pub injective: bool,
    /// `gcd(lambda, nk)`; equals `n` exactly when the map is injective and
    /// the target group has order `nk`.
    pub cokernel_order: u64,
    /// `Some(result)` when the target was small enough for the full matrix
    /// route to double-check group, class order, and cokernel.
    pub snf_cross_check: Option<bool>,
}

impl TorsionPowerReport {
    pub fn all(&self) -> bool {
        self.source_is_cyclic_of_order_k
            && self.source_generator_order_ok
            && self.chain_map_commutes
            && self.boundary_certificate_ok
            && self.target_cocycle_ok
            && self.target_generator_value_ok
            && self.injective
            && self.cokernel_order == u64::from(self.n)
            && self.snf_cross_check != Some(false)
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn power_map_torsion_check(
    k: u32,
    i: u32,
    n: u32,
    snf_cross_check_max_cells: u128,
) -> Result<TorsionPowerReport> {
    if k < 2 || n < 1 || i < 1 || !i.is_multiple_of(k) {
        return Err(Error::Usage("torsion check requires k >= 2, n >= 1, and k | i".into()));
    }
    let d = i / k - 1;
    let degree = 2 * d as usize + 1;
    let big_k = n * k;

    // Source side: group, generator, and the boundary certificate for k·w.
    let source = HomologyData::new(ChainComplex::new(k, i)?);
    let expected = InvariantFactors { torsion: vec![BigUint::from(k)], free_rank: 0 };
    let source_is_cyclic_of_order_k = source.presentation(degree).invariant_factors() == expected;

    let w = fundamental_torsion_cycle(k, d);
    assert!(
        Chain::from_word(w.clone(), BigInt::one()).boundary(k).is_zero(),
        "the alternating word must be a cycle"
    );
    let w_class = source
        .class_of_chain(degree, &Chain::from_word(w.clone(), BigInt::one()))
        .expect("cycle lies in the kernel");
    let source_generator_order_ok =
        source.presentation(degree).element_order_dividing(&w_class, u64::from(k))
            == Some(u64::from(k));

    let w_vec = source
        .complex
        .chain_to_vec(degree, &Chain::from_word(w.clone(), BigInt::one()))
        .expect("w is a basis cell");
    let kw: Vec<BigInt> = w_vec.iter().map(|c| c * BigInt::from(k)).collect();
    let y = snf(source.complex.boundary(degree + 1))
        .solve(&kw)
        .expect("k times the generator bounds in the source");
    let y_chain = source.complex.vec_to_chain(degree + 1, &y);

    let chain_map_commutes = power_map_commutes(k, i, n)?;

    // Target side: cocycle certificate plus the pushed boundary certificate.
    let target_cocycle_ok = verify_torsion_cocycle(big_k, d);
    let w_target = fundamental_torsion_cycle(big_k, d);
    let target_generator_value_ok = torsion_cocycle_value(big_k, w_target.letters())
        == u64::from(big_k - 1)
        && Chain::from_word(w_target, BigInt::one()).boundary(big_k).is_zero();

    let gw = w.scaled(n);
    let lambda = torsion_cocycle_value(big_k, gw.letters());

    let pushed = y_chain.map_words(|c| c.scaled(n));
    let boundary_certificate_ok =
        pushed.boundary(big_k) == Chain::from_word(gw.clone(), BigInt::from(k));

    // ord([g(w)]) divides k by the certificate and is at least
    // ord(lambda mod nk); injectivity is ord = k, i.e. gcd(lambda, nk) = n.
    let cokernel_order = gcd_u64(lambda, u64::from(big_k));
    let injective = lambda != 0 && cokernel_order == u64::from(n);

    let snf_cross_check = if total_cells(big_k, n * i) <= snf_cross_check_max_cells {
        let target = HomologyData::new(ChainComplex::new(big_k, n * i)?);
        let target_expected =
            InvariantFactors { torsion: vec![BigUint::from(big_k)], free_rank: 0 };
        let group_ok = target.presentation(degree).invariant_factors() == target_expected;
        let gw_class = target
            .class_of_chain(degree, &Chain::from_word(gw.clone(), BigInt::one()))
            .expect("image of a cycle is a cycle");
        let order_ok =
            target.presentation(degree).element_order_dividing(&gw_class, u64::from(big_k))
                == Some(u64::from(k));
        let coker = target
            .presentation(degree)
            .quotient_by(&IntMatrix::from_columns(gw_class.len(), std::slice::from_ref(&gw_class)))
            .expect("rank matches");
        let coker_ok = coker.order() == GroupOrder::Finite(BigUint::from(n));
        Some(group_ok && order_ok && coker_ok)
    } else {
        None
    };

    Ok(TorsionPowerReport {
        k,
        i,
        n,
        degree,
        source_is_cyclic_of_order_k,
        source_generator_order_ok,
        chain_map_commutes,
        boundary_certificate_ok,
        target_cocycle_ok,
        target_generator_value_ok,
        lambda,
        injective,
        cokernel_order,
        snf_cross_check,
    })
}

/// Naturality of the power maps in `n`: scaling by `n` then `n2` is scaling
/// by `n·n2` on the nose at chain level, and the induced torsion classes
/// compose accordingly through the detecting cocycles.
#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub chain_level_ok: bool,
    /// `None` when the final target is too large to certify the cocycle.
    pub class_level: Option<bool>,
}

pub fn power_map_naturality_check(
    k: u32,
    i: u32,
    n: u32,
    n2: u32,
    class_check_max_cells: u128,
) -> Result<NaturalityReport> {
    let mut cache = BTreeMap::new();
    power_map_naturality_check_cached(k, i, n, n2, class_check_max_cells, &mut cache)
}

/// Same as [`power_map_naturality_check`], memoizing cocycle verifications
/// across calls; keys are `(k, d)` pairs already certified.
pub fn power_map_naturality_check_cached(
    k: u32,
    i: u32,
    n: u32,
    n2: u32,
    class_check_max_cells: u128,
    verified_cocycles: &mut BTreeMap<(u32, u32), bool>,
) -> Result<NaturalityReport> {
    if k < 2 || i < 1 || n < 1 || n2 < 1 {
        return Err(Error::Usage("naturality check requires k >= 2, i, n, n2 >= 1".into()));
    }
    let complex = ChainComplex::new(k, i)?;
    let mut chain_level_ok = true;
    for r in 0..=complex.max_degree() {
        for w in complex.cells_in(r) {
            if w.scaled(n).scaled(n2) != w.scaled(n * n2) {
                chain_level_ok = false;
            }
        }
    }

    let class_level = if i.is_multiple_of(k) {
        let d = i / k - 1;
        let k_mid = n * k;
        let k_final = n * n2 * k;
        let enumerated_degree = 2 * d as usize + 2;
        let mid_count = count_cells(k_mid, n * i, enumerated_degree);
        let final_count = count_cells(k_final, n * n2 * i, enumerated_degree);
        if mid_count.max(final_count) > class_check_max_cells {
            None
        } else {
            let mut certified = |kk: u32| {
                *verified_cocycles.entry((kk, d)).or_insert_with(|| verify_torsion_cocycle(kk, d))
            };
            let cocycles_ok = certified(k_mid) && certified(k_final);
            // class coefficients relative to the fundamental cycles:
            // [z] = xi(z)·[w] with xi(z) = -cocycle(z) mod k
            let xi = |kk: u32, word: &CyclicWord| -> u64 {
                let v = torsion_cocycle_value(kk, word.letters());
                (u64::from(kk) - v) % u64::from(kk)
            };
            let w_k = fundamental_torsion_cycle(k, d);
            let w_mid = fundamental_torsion_cycle(k_mid, d);
            let a = xi(k_mid, &w_k.scaled(n));
            let b = xi(k_final, &w_mid.scaled(n2));
            let c = xi(k_final, &w_k.scaled(n * n2));
            let compose_ok = (a as u128 * b as u128) % u64::from(k_final) as u128 == c as u128;
            Some(cocycles_ok && compose_ok)
        }
    } else {
        Some(true) // no torsion class to track
    };

    Ok(NaturalityReport { chain_level_ok, class_level })
}
