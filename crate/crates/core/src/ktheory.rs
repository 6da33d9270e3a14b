//! Invariant-factor presentations of the odd relative K-groups
//! `K_{2j-1}(F_p[x]/(x^m), (x)) ≅ W_{jm}(F_p) / V_m W_j(F_p)`, the power maps
//! `v_n` induced by `x ↦ x^n`, the short-exact-sequence ladder relating the
//! two, and finite stages of the two colimit towers.
//!
//! Everything is phrased in the p-typical coordinates of `W_S(F_p)`: the
//! additive bijection `decompose` identifies `W_S(F_p)` with
//! `⊕_e Z/p^{t_e}` over the p-free `e ∈ S`, and the Verschiebung `V_n`
//! becomes an explicit one-entry-per-column integer matrix there.

use crate::abgroup::{biguint_json, ses_check, AbGroupPresentation, GroupMap, GroupOrder, SesReport};
use crate::matrix::IntMatrix;
use crate::truncation::TruncationSet;
use crate::witt::WittVector;
use crate::{is_prime, Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde_json::{json, Value};

/// The p-typical coordinate chart `W_S(F_p) ≅ ⊕_e Z/p^{t_e}` (`e` p-free,
/// ascending).
#[derive(Clone, Debug)]
pub struct PTypicalAmbient {
    p: u64,
    set: TruncationSet,
    components: Vec<(u64, u32)>,
}

impl PTypicalAmbient {
    pub fn new(p: u64, set: TruncationSet) -> Result<Self> {
        let components = set.p_typical_lengths(p)?;
        Ok(PTypicalAmbient { p, set, components })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn components(&self) -> &[(u64, u32)] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    fn index_of(&self, e: u64) -> Option<usize> {
        self.components.binary_search_by_key(&e, |&(j, _)| j).ok()
    }

    /// `⊕_e Z/p^{t_e}` as a presented group.
    pub fn presentation(&self) -> AbGroupPresentation {
        let orders: Vec<BigUint> =
            self.components.iter().map(|&(_, t)| BigUint::from(self.p).pow(t)).collect();
        AbGroupPresentation::from_diagonal(&orders)
    }

    /// Coordinates of a Witt vector in this chart, as a column vector.
    pub fn coordinates(&self, w: &WittVector) -> Result<Vec<BigInt>> {
        if w.set() != &self.set || w.modulus() != self.p {
            return Err(Error::Usage(format!(
                "vector on {} mod {} does not match the chart on {} mod {}",
                w.set(),
                w.modulus(),
                self.set,
                self.p
            )));
        }
        let d = w.decompose()?;
        Ok(d.components.iter().map(|c| BigInt::from(c.value.clone())).collect())
    }

    /// The matrix of `V_n : W_{S/n}(F_p) -> W_S(F_p)` in p-typical
    /// coordinates. Writing `n = p^v · n'` with `p ∤ n'`, the chart component
    /// `e` of the source lands in component `e·n'` of the target, multiplied
    /// by `n' · p^v`.
    pub fn v_matrix_from(&self, source: &PTypicalAmbient, n: u64) -> Result<IntMatrix> {
        if source.p != self.p {
            return Err(Error::Usage("charts over different primes".into()));
        }
        if source.set != self.set.divide(n) {
            return Err(Error::Usage(format!(
                "V_{n} into {} expects the chart on {}, got {}",
                self.set,
                self.set.divide(n),
                source.set
            )));
        }
        let mut v = 0u32;
        let mut n_free = n;
        while n_free.is_multiple_of(self.p) {
            n_free /= self.p;
            v += 1;
        }
        let scale = BigInt::from(n_free) * BigInt::from(self.p).pow(v);
        let mut m = IntMatrix::zero(self.rank(), source.rank());
        for (col, &(e, _)) in source.components.iter().enumerate() {
            let row = self
                .index_of(e * n_free)
                .expect("scaled p-free index must appear in the target chart");
            m[(row, col)] = scale.clone();
        }
        Ok(m)
    }
}

/// `W_S(F_p) / V_m W_{S/m}(F_p)` with its coordinate bookkeeping.
#[derive(Clone, Debug)]
pub struct WittQuotient {
    pub ambient: PTypicalAmbient,
    pub m: u64,
    /// Images of the subgroup generators `V_{ms}([c])` in the chart.
    pub subgroup_generators: IntMatrix,
    pub group: AbGroupPresentation,
}

/// The quotient `W_S(F_p) / V_m W_{S/m}(F_p)` presented on the p-typical
/// chart of `W_S(F_p)`. The subgroup is generated by the images of
/// `V_{ms}([c])` for `s ∈ S/m` and `c ∈ {1, ..., p-1}`; that family generates
/// `V_m W_{S/m}(F_p)` by triangular induction on coefficients.
pub fn witt_quotient_group(p: u64, set: &TruncationSet, m: u64) -> Result<WittQuotient> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Usage("quotient requires m >= 1".into()));
    }
    let ambient = PTypicalAmbient::new(p, set.clone())?;
    let mut gen_cols: Vec<Vec<BigInt>> = Vec::new();
    for &s in set.divide(m).elements() {
        let ms = m * s;
        let source = set.divide(ms);
        for c in 1..p {
            let teich = WittVector::teichmuller(BigInt::from(c), source.clone(), p);
            let image = teich.verschiebung(ms, set)?;
            gen_cols.push(ambient.coordinates(&image)?);
        }
    }
    let subgroup_generators = IntMatrix::from_columns(ambient.rank(), &gen_cols);
    let group = ambient.presentation().quotient_by(&subgroup_generators)?;
    Ok(WittQuotient { ambient, m, subgroup_generators, group })
}

/// Report for one relative K-group `K_{2j-1}(F_p[x]/(x^m), (x))`.
#[derive(Clone, Debug)]
pub struct KGroupReport {
    pub p: u64,
    pub m: u64,
    pub j: u64,
    pub degree: u64,
    pub quotient: WittQuotient,
    pub invariant_factors: Vec<BigUint>,
    pub order: BigUint,
    pub oracle_checked: Option<bool>,
}

impl KGroupReport {
    /// The order forced by cardinality: `p^{j(m-1)}`.
    pub fn expected_order(&self) -> BigUint {
        BigUint::from(self.p).pow((self.j * (self.m - 1)) as u32)
    }

    pub fn group_display(&self) -> String {
        self.quotient.group.invariant_factors().to_string()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "j": self.j,
            "degree": self.degree,
            // largest factor first, matching the Z/a ⊕ Z/b display
            "invariant_factors": self.invariant_factors.iter().rev().map(biguint_json).collect::<Vec<_>>(),
            "order": self.order.to_string(),
            "ambient": self.quotient.ambient.components().iter().map(|&(e, t)| json!({
                "component": e,
                "modulus": biguint_json(&BigUint::from(self.p).pow(t)),
            })).collect::<Vec<_>>(),
            "oracle_checked": self.oracle_checked,
        })
    }
}

/// `K_{2j-1}(F_p[x]/(x^m), (x)) = W_{jm}(F_p) / V_m W_j(F_p)` in degree
/// `2j - 1`.
pub fn k_group(p: u64, m: u64, j: u64) -> Result<KGroupReport> {
    if m == 0 || j == 0 {
        return Err(Error::Usage("k_group requires m >= 1 and j >= 1".into()));
    }
    let set = TruncationSet::interval(j * m);
    let quotient = witt_quotient_group(p, &set, m)?;
    let inv = quotient.group.invariant_factors();
    debug_assert_eq!(inv.free_rank, 0, "relative K-groups here are finite");
    let order = match inv.order() {
        GroupOrder::Finite(n) => n,
        GroupOrder::Infinite => unreachable!("finite p-group"),
    };
    Ok(KGroupReport {
        p,
        m,
        j,
        degree: 2 * j - 1,
        quotient,
        invariant_factors: inv.torsion,
        order,
        oracle_checked: None,
    })
}

/// The even-degree relative K-groups vanish; reported as the trivial group in
/// degree `2j` without computation.
pub fn k_group_even(p: u64, m: u64, j: u64) -> Result<Value> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if m == 0 || j == 0 {
        return Err(Error::Usage("k_group_even requires m >= 1 and j >= 1".into()));
    }
    Ok(json!({
        "p": p,
        "m": m,
        "j": j,
        "degree": 2 * j,
        "invariant_factors": [],
        "order": "1",
    }))
}

/// The power map `v_n : K_{2j-1}(F_p[x]/(x^m)) -> K_{2j-1}(F_p[x]/(x^{mn}))`
/// induced by `x ↦ x^n`, realized as the coordinate matrix of `V_n` pushed to
/// the quotients. Well-definedness is certified during construction.
pub fn v_map(p: u64, m: u64, n: u64, j: u64) -> Result<GroupMap> {
    if n == 0 {
        return Err(Error::Usage("v_map requires n >= 1".into()));
    }
    let source = k_group(p, m, j)?;
    let target = k_group(p, m * n, j)?;
    v_map_between(&source, &target, n)
}

fn v_map_between(source: &KGroupReport, target: &KGroupReport, n: u64) -> Result<GroupMap> {
    let matrix = target.quotient.ambient.v_matrix_from(&source.quotient.ambient, n)?;
    GroupMap::induced(matrix, &source.quotient.group, &target.quotient.group)
}

/// Exactness and commutation report for the ladder
///
/// ```text
/// 0 → W_j(F_p) --V_m--> W_{jm}(F_p)   → K_{2j-1}(F_p[x]/(x^m))     → 0
///        |id                |V_n                |v_n
/// 0 → W_j(F_p) --V_mn--> W_{jmn}(F_p) → K_{2j-1}(F_p[x]/(x^{mn}))  → 0
/// ```
#[derive(Clone, Debug)]
pub struct SesDiagramReport {
    pub p: u64,
    pub m: u64,
    pub n: u64,
    pub j: u64,
    pub top_row: SesReport,
    pub bottom_row: SesReport,
    pub left_square_commutes: bool,
    pub right_square_commutes: bool,
    pub v_map_injective: bool,
}

impl SesDiagramReport {
    pub fn all(&self) -> bool {
        self.top_row.all()
            && self.bottom_row.all()
            && self.left_square_commutes
            && self.right_square_commutes
            && self.v_map_injective
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "j": self.j,
            "top_row_exact": self.top_row.all(),
            "bottom_row_exact": self.bottom_row.all(),
            "left_square_commutes": self.left_square_commutes,
            "right_square_commutes": self.right_square_commutes,
            "v_map_injective": self.v_map_injective,
            "all": self.all(),
        })
    }
}

fn row_ses(p: u64, m: u64, j: u64) -> Result<(GroupMap, GroupMap, KGroupReport)> {
    let k = k_group(p, m, j)?;
    let small = PTypicalAmbient::new(p, TruncationSet::interval(j))?;
    let small_group = small.presentation();
    let middle_group = k.quotient.ambient.presentation();
    let vm_matrix = k.quotient.ambient.v_matrix_from(&small, m)?;
    let left = GroupMap::induced(vm_matrix, &small_group, &middle_group)?;
    let right = GroupMap::induced(
        IntMatrix::identity(k.quotient.ambient.rank()),
        &middle_group,
        &k.quotient.group,
    )?;
    Ok((left, right, k))
}

pub fn ses_diagram_check(p: u64, m: u64, n: u64, j: u64) -> Result<SesDiagramReport> {
    if m == 0 || n == 0 || j == 0 {
        return Err(Error::Usage("ses_diagram_check requires m, n, j >= 1".into()));
    }
    let (top_left, top_right, k_top) = row_ses(p, m, j)?;
    let (bot_left, bot_right, k_bot) = row_ses(p, m * n, j)?;
    let top_row = ses_check(&top_left, &top_right)?;
    let bottom_row = ses_check(&bot_left, &bot_right)?;

    // Left square: V_mn = V_n ∘ V_m. Checked both on coordinate matrices and
    // coefficientwise on the Teichmüller-Verschiebung generators of W_j(F_p).
    let v_n_matrix = k_bot.quotient.ambient.v_matrix_from(&k_top.quotient.ambient, n)?;
    let matrix_commutes = v_n_matrix.mul(top_left.matrix()) == *bot_left.matrix();
    let mut witt_commutes = true;
    let s_j = TruncationSet::interval(j);
    let s_jm = TruncationSet::interval(j * m);
    let s_jmn = TruncationSet::interval(j * m * n);
    for &s in s_j.elements() {
        for c in 1..p {
            let teich = WittVector::teichmuller(BigInt::from(c), s_j.divide(s), p);
            let g = teich.verschiebung(s, &s_j)?;
            let via_two = g.verschiebung(m, &s_jm)?.verschiebung(n, &s_jmn)?;
            let direct = g.verschiebung(m * n, &s_jmn)?;
            if via_two != direct {
                witt_commutes = false;
            }
        }
    }
    let left_square_commutes = matrix_commutes && witt_commutes;

    // Right square: v_n after the top quotient equals the bottom quotient
    // after the ambient V_n.
    let v = v_map_between(&k_top, &k_bot, n)?;
    let vn_ambient = GroupMap::induced(
        v_n_matrix,
        &k_top.quotient.ambient.presentation(),
        &k_bot.quotient.group,
    )?;
    let via_quotient = v.compose(&top_right)?;
    let right_square_commutes = via_quotient.eq_as_maps(&vn_ambient);

    let v_map_injective = v.is_injective();

    Ok(SesDiagramReport {
        p,
        m,
        n,
        j,
        top_row,
        bottom_row,
        left_square_commutes,
        right_square_commutes,
        v_map_injective,
    })
}

/// One stage of a colimit tower, with the transition into the next stage.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub stage: u64,
    pub m: u64,
    pub report: KGroupReport,
    /// The map into the next computed stage, induced by V_p; `None` on the
    /// last stage.
    pub transition: Option<GroupMap>,
    pub transition_injective: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerKind {
    /// Stages `W_{j p^n}(F_p) / V_{p^n} W_j(F_p)`, attached to the tower of
    /// p-power roots of p.
    Fermat,
    /// Stages `W_{j p^{n-1}(p-1)}(F_p) / V_{p^{n-1}(p-1)} W_j(F_p)`, attached
    /// to the tower of p-power roots of unity.
    Cyclotomic,
}

impl TowerKind {
    /// The truncation index of stage `n`; `None` on machine overflow, which
    /// the order guard would reject anyway.
    pub fn stage_index(&self, p: u64, n: u64) -> Option<u64> {
        let exp = u32::try_from(match self {
            TowerKind::Fermat => n,
            TowerKind::Cyclotomic => n - 1,
        })
        .ok()?;
        let power = p.checked_pow(exp)?;
        match self {
            TowerKind::Fermat => Some(power),
            TowerKind::Cyclotomic => power.checked_mul(p - 1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TowerKind::Fermat => "fermat",
            TowerKind::Cyclotomic => "cyclotomic",
        }
    }
}

/// Guard against towers whose ambient Witt ring order `p^|S|` exceeds
/// `2^max_order_bits`.
fn check_order_guard(p: u64, set_size: u64, max_order_bits: u32) -> Result<()> {
    let too_big = u32::try_from(set_size)
        .map(|size| BigUint::from(p).pow(size) > (BigUint::one() << max_order_bits))
        .unwrap_or(true);
    if too_big {
        return Err(Error::Resource(format!(
            "ambient Witt ring order p^|S| = {p}^{set_size} exceeds 2^{max_order_bits}; raise --max-order-bits"
        )));
    }
    Ok(())
}

pub fn tower(
    kind: TowerKind,
    p: u64,
    j: u64,
    stages: u64,
    max_order_bits: u32,
) -> Result<Vec<TowerStage>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if j == 0 || stages == 0 {
        return Err(Error::Usage("tower requires j >= 1 and at least one stage".into()));
    }
    let mut reports = Vec::new();
    for n in 1..=stages {
        let (m, size) = kind
            .stage_index(p, n)
            .and_then(|m| j.checked_mul(m).map(|size| (m, size)))
            .ok_or_else(|| {
                Error::Resource(format!("stage {n} of the {} tower overflows", kind.name()))
            })?;
        check_order_guard(p, size, max_order_bits)?;
        reports.push((n, m, k_group(p, m, j)?));
    }
    let mut out = Vec::with_capacity(reports.len());
    for idx in 0..reports.len() {
        let (n, m, report) = reports[idx].clone();
        let (transition, transition_injective) = if idx + 1 < reports.len() {
            let next = &reports[idx + 1].2;
            // consecutive stage indices differ by a factor of p in both towers
            debug_assert_eq!(next.m, m * p);
            let map = v_map_between(&report, next, p)?;
            let injective = map.is_injective();
            (Some(map), Some(injective))
        } else {
            (None, None)
        };
        out.push(TowerStage { stage: n, m, report, transition, transition_injective });
    }
    Ok(out)
}

pub fn tower_fermat(p: u64, j: u64, stages: u64, max_order_bits: u32) -> Result<Vec<TowerStage>> {
    tower(TowerKind::Fermat, p, j, stages, max_order_bits)
}

pub fn tower_cyclotomic(
    p: u64,
    j: u64,
    stages: u64,
    max_order_bits: u32,
) -> Result<Vec<TowerStage>> {
    tower(TowerKind::Cyclotomic, p, j, stages, max_order_bits)
}

/// Largest stage count for which the tower passes the order guard.
pub fn max_guarded_stages(kind: TowerKind, p: u64, j: u64, max_order_bits: u32) -> u64 {
    let mut n = 0u64;
    loop {
        let next = n + 1;
        match kind.stage_index(p, next).and_then(|m| j.checked_mul(m)) {
            Some(size) if check_order_guard(p, size, max_order_bits).is_ok() => n = next,
            _ => return n,
        }
    }
}

pub fn tower_to_json(stages: &[TowerStage], kind: TowerKind) -> Value {
    json!({
        "kind": kind.name(),
        "stages": stages.iter().map(|s| json!({
            "stage": s.stage,
            "m": s.m,
            "invariant_factors": s.report.invariant_factors.iter().rev().map(biguint_json).collect::<Vec<_>>(),
            "order": s.report.order.to_string(),
            "transition_injective": s.transition_injective,
        })).collect::<Vec<_>>(),
    })
}

/// Independent brute-force oracle for `j = 1`: the relative `K_1` is the
/// group of principal units `(1 + x F_p[x]/(x^m))^×`. Enumerates all
/// `p^{m-1}` units, counts solutions of `g^{p^k} = 1` for each `k`, and reads
/// the invariant factors off the rank profile.
pub fn unit_group_oracle(p: u64, m: u64, max_elements: u64) -> Result<Vec<BigUint>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Usage("oracle requires m >= 1".into()));
    }
    let digits = (m - 1) as usize;
    let size = (p as u128)
        .checked_pow(digits as u32)
        .filter(|&s| s <= max_elements as u128)
        .ok_or_else(|| {
            Error::Resource(format!(
                "unit group has p^{digits} = {p}^{digits} elements, above the enumeration bound {max_elements}"
            ))
        })? as u64;

    // units 1 + a_1 x + ... + a_{m-1} x^{m-1}, stored as base-p digit strings
    let decode = |mut idx: u64| -> Vec<u64> {
        let mut coeffs = vec![0u64; digits];
        for c in coeffs.iter_mut() {
            *c = idx % p;
            idx /= p;
        }
        coeffs
    };
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        // (1 + A)(1 + B) = 1 + A + B + AB, truncated at x^m
        let mut out = vec![0u64; digits];
        for k in 0..digits {
            out[k] = (a[k] + b[k]) % p;
        }
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                let deg = i + k + 2;
                if deg > digits {
                    break;
                }
                out[deg - 1] = (out[deg - 1] + ai * bk) % p;
            }
        }
        out
    };
    let pow_p = |a: &[u64]| -> Vec<u64> {
        let mut acc = a.to_vec();
        for _ in 1..p {
            acc = mul(&acc, a);
        }
        acc
    };

    // counts[k] = #{ g : g^{p^k} = 1 }
    let max_exp = {
        let mut e = 0u32;
        let mut x = 1u64;
        while x < size {
            x = x.saturating_mul(p);
            e += 1;
        }
        e
    };
    let mut counts = vec![0u64; (max_exp + 2) as usize];
    for idx in 0..size {
        let g = decode(idx);
        let mut x = g;
        let mut k = 0u32;
        while x.iter().any(|&c| c != 0) {
            x = pow_p(&x);
            k += 1;
            assert!(k <= max_exp, "element order exceeds the group exponent bound");
        }
        for slot in k..=max_exp + 1 {
            counts[slot as usize] += 1;
        }
    }

    // counts[k] = p^{Σ_i min(k, e_i)}; successive quotients count the factors
    // with exponent at least k, i.e. the conjugate partition.
    let log_p = |mut n: u64| -> u32 {
        let mut e = 0;
        while n > 1 {
            assert_eq!(n % p, 0, "unit group order must be a power of p");
            n /= p;
            e += 1;
        }
        e
    };
    let mut at_least = Vec::new(); // at_least[k-1] = #{ i : e_i >= k }
    for k in 1..=(max_exp + 1) as usize {
        let diff = log_p(counts[k]) - log_p(counts[k - 1]);
        if diff == 0 {
            break;
        }
        at_least.push(diff);
    }
    let num_factors = at_least.first().copied().unwrap_or(0);
    let mut factors = Vec::new();
    for i in 1..=num_factors {
        let e_i = at_least.iter().filter(|&&c| c >= i).count() as u32;
        factors.push(BigUint::from(p).pow(e_i));
    }
    factors.sort(); // ascending divisibility order for a common prime
    Ok(factors)
}

pub const DEFAULT_ORACLE_BOUND: u64 = 1 << 20;

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(unit_group_oracle(2, 2, DEFAULT_ORACLE_BOUND).unwrap(), factors(&[2]));
        assert_eq!(unit_group_oracle(3, 2, DEFAULT_ORACLE_BOUND).unwrap(), factors(&[3]));
        assert_eq!(unit_group_oracle(2, 4, DEFAULT_ORACLE_BOUND).unwrap(), factors(&[2, 4]));
        assert!(unit_group_oracle(2, 30, DEFAULT_ORACLE_BOUND).is_err());
        assert!(unit_group_oracle(4, 2, DEFAULT_ORACLE_BOUND).is_err());
    }

    #[test]
    fn witt_quotient_examples() {
        // W_2(F_2) / V_2 W_1(F_2) = Z/2
        let q = witt_quotient_group(2, &TruncationSet::interval(2), 2).unwrap();
        assert_eq!(q.group.invariant_factors().torsion, factors(&[2]));

        // W_4(F_2) / V_4 W_1(F_2) = Z/4 ⊕ Z/2
        let q = witt_quotient_group(2, &TruncationSet::interval(4), 4).unwrap();
        assert_eq!(q.group.invariant_factors().torsion, factors(&[2, 4]));

        // m = 1 quotients by everything
        let q = witt_quotient_group(5, &TruncationSet::interval(3), 1).unwrap();
        assert!(q.group.is_trivial());

        assert!(witt_quotient_group(6, &TruncationSet::interval(2), 2).is_err());
    }

    #[test]
    fn k_group_examples() {
        let k = k_group(2, 4, 1).unwrap();
        assert_eq!(k.degree, 1);
        assert_eq!(k.invariant_factors, factors(&[2, 4]));
        assert_eq!(k.order, BigUint::from(8u32));
        assert_eq!(k.expected_order(), BigUint::from(8u32));

        let k = k_group(3, 2, 1).unwrap();
        assert_eq!(k.invariant_factors, factors(&[3]));
        assert_eq!(k.order, BigUint::from(3u32));

        let k = k_group(2, 2, 2).unwrap();
        assert_eq!(k.degree, 3);
        assert_eq!(k.order, BigUint::from(4u32));
    }

    #[test]
    fn k_group_matches_oracle_on_a_small_grid() {
        for p in [2u64, 3, 5] {
            for m in 2u64..=4 {
                let k = k_group(p, m, 1).unwrap();
                let oracle = unit_group_oracle(p, m, DEFAULT_ORACLE_BOUND).unwrap();
                assert_eq!(k.invariant_factors, oracle, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn even_degrees_are_zero() {
        let v = k_group_even(2, 4, 1).unwrap();
        assert_eq!(v["degree"], 2);
        assert_eq!(v["order"], "1");
        let v = k_group_even(3, 9, 2).unwrap();
        assert_eq!(v["degree"], 4);
        assert_eq!(v["order"], "1");
    }

    #[test]
    fn v_map_examples() {
        // (2, 2, 2, 1): Z/2 -> Z/4 ⊕ Z/2, injective with image of order 2
        let v = v_map(2, 2, 2, 1).unwrap();
        assert!(v.is_injective());
        assert_eq!(v.image_order(), GroupOrder::Finite(BigUint::from(2u32)));

        // n = 1 is the identity
        let v = v_map(2, 3, 1, 1).unwrap();
        assert!(v.is_injective());
        assert!(v.is_surjective());

        // (3, 2, 3, 1): injective into K_1(F_3[x]/(x^6))
        let v = v_map(3, 2, 3, 1).unwrap();
        assert!(v.is_injective());
    }

    #[test]
    fn v_map_functoriality_small() {
        let f = v_map(2, 2, 2, 1).unwrap();
        let g = v_map(2, 4, 3, 1).unwrap();
        let composite = g.compose(&f).unwrap();
        let direct = v_map(2, 2, 6, 1).unwrap();
        assert!(composite.eq_as_maps(&direct));
    }

    #[test]
    fn ses_diagram_examples() {
        assert!(ses_diagram_check(2, 2, 2, 1).unwrap().all());
        assert!(ses_diagram_check(3, 3, 2, 2).unwrap().all());
        // degenerate m = 1 row
        assert!(ses_diagram_check(2, 1, 2, 1).unwrap().all());
        assert!(ses_diagram_check(5, 1, 3, 2).unwrap().all());
    }

    #[test]
    fn tower_examples() {
        let stages = tower_fermat(2, 1, 2, 64).unwrap();
        assert_eq!(stages[0].report.invariant_factors, factors(&[2]));
        assert_eq!(stages[1].report.invariant_factors, factors(&[2, 4]));
        assert_eq!(stages[1].report.order, BigUint::from(8u32));
        assert_eq!(stages[0].transition_injective, Some(true));

        let stages = tower_fermat(3, 1, 1, 64).unwrap();
        assert_eq!(stages[0].report.order, BigUint::from(9u32));

        // cyclotomic stage 1 for p = 3: W_2(F_3)/V_2 W_1(F_3) = Z/3
        let stages = tower_cyclotomic(3, 1, 2, 64).unwrap();
        assert_eq!(stages[0].report.invariant_factors, factors(&[3]));
        assert_eq!(stages[1].report.order, BigUint::from(3u32).pow(5));

        // the guard trips instead of grinding
        assert!(tower_fermat(2, 1, 9, 64).is_err());
        assert_eq!(max_guarded_stages(TowerKind::Fermat, 2, 1, 64), 6);
        assert_eq!(max_guarded_stages(TowerKind::Cyclotomic, 2, 1, 64), 7);
        assert_eq!(max_guarded_stages(TowerKind::Fermat, 3, 1, 64), 3);
    }

    #[test]
    fn v_matrix_agrees_with_coefficientwise_verschiebung() {
        // deterministic small sweep; the seeded randomized sweep is criterion 5
        let s12 = TruncationSet::interval(12);
        for p in [2u64, 3] {
            for n in [2u64, 3, 4, 6] {
                let target = PTypicalAmbient::new(p, s12.clone()).unwrap();
                let source = PTypicalAmbient::new(p, s12.divide(n)).unwrap();
                let matrix = target.v_matrix_from(&source, n).unwrap();
                for seed in 0..6u64 {
                    let coeffs: Vec<BigInt> = source
                        .set()
                        .elements()
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| BigInt::from((seed + i as u64 * 5 + s) % p))
                        .collect();
                    let a = WittVector::new(source.set().clone(), p, coeffs).unwrap();
                    let via_matrix = matrix.mul_vec(&source.coordinates(&a).unwrap());
                    let direct = target.coordinates(&a.verschiebung(n, &s12).unwrap()).unwrap();
                    for (col, &(_, t)) in target.components().iter().enumerate() {
                        use num_integer::Integer;
                        let modulus = BigInt::from(p).pow(t);
                        assert_eq!(
                            via_matrix[col].mod_floor(&modulus),
                            direct[col].mod_floor(&modulus),
                            "p={p} n={n} component {col}"
                        );
                    }
                }
            }
        }
    }
}
