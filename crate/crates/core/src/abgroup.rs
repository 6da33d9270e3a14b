//! Finitely generated abelian groups presented as cokernels of integer
//! matrices, with maps between them certified by exact lattice arithmetic.
//!
//! A presentation is an ambient rank `r` together with an `r x c` relation
//! matrix whose columns span the relation lattice; the group is
//! `Z^r / (column span)`. Groups carry ambient coordinates throughout so that
//! maps are plain integer matrices.

use crate::matrix::{hnf_basis, hnf_contains, hnf_contains_all, snf, IntMatrix};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbGroupPresentation {
    rank: usize,
    relations: IntMatrix,
}

/// Invariant factors in divisibility order plus the free rank; factors equal
/// to one are dropped, zeros on the Smith diagonal count toward the free rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantFactors {
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupOrder {
    Finite(BigUint),
    Infinite,
}

impl GroupOrder {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Infinite => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => write!(f, "infinite"),
        }
    }
}

impl InvariantFactors {
    pub fn order(&self) -> GroupOrder {
        if self.free_rank > 0 {
            return GroupOrder::Infinite;
        }
        let mut n = BigUint::one();
        for t in &self.torsion {
            n *= t;
        }
        GroupOrder::Finite(n)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        // largest factor first reads more naturally in the reports
        for t in self.torsion.iter().rev() {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" \u{2295} "))
    }
}

impl AbGroupPresentation {
    pub fn new(rank: usize, relations: IntMatrix) -> Result<Self> {
        if relations.nrows() != rank {
            return Err(Error::Usage(format!(
                "relation matrix has {} rows but the ambient rank is {rank}",
                relations.nrows()
            )));
        }
        Ok(AbGroupPresentation { rank, relations })
    }

    pub fn free(rank: usize) -> Self {
        AbGroupPresentation { rank, relations: IntMatrix::zero(rank, 0) }
    }

    pub fn trivial() -> Self {
        AbGroupPresentation::free(0)
    }

    /// `Z/d_1 ⊕ ... ⊕ Z/d_k` presented with the diagonal relation matrix.
    pub fn from_diagonal(orders: &[BigUint]) -> Self {
        let entries: Vec<BigInt> = orders.iter().map(|d| BigInt::from(d.clone())).collect();
        let n = entries.len();
        AbGroupPresentation { rank: n, relations: IntMatrix::diagonal(&entries, n, n) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_hnf(&self) -> IntMatrix {
        hnf_basis(&self.relations)
    }

    pub fn invariant_factors(&self) -> InvariantFactors {
        let s = snf(&self.relations);
        let diag = s.diagonal();
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.to_biguint().expect("snf diagonal is nonnegative"))
            .collect();
        InvariantFactors { torsion, free_rank: self.rank - nonzero }
    }

    pub fn order(&self) -> GroupOrder {
        self.invariant_factors().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors().is_trivial()
    }

    /// Quotient by the subgroup spanned by the columns of `gens`, given in
    /// ambient coordinates: simply adjoin them as relations.
    pub fn quotient_by(&self, gens: &IntMatrix) -> Result<Self> {
        if gens.nrows() != self.rank {
            return Err(Error::Usage(format!(
                "subgroup generators have {} rows, ambient rank is {}",
                gens.nrows(),
                self.rank
            )));
        }
        Ok(AbGroupPresentation { rank: self.rank, relations: self.relations.hstack(gens) })
    }

    /// Same ambient rank and same relation lattice.
    pub fn same_group(&self, other: &AbGroupPresentation) -> bool {
        self.rank == other.rank && self.relation_hnf() == other.relation_hnf()
    }

    /// Order of the class of `v`, assuming it divides `n`: the smallest
    /// divisor `q` of `n` with `q·v` in the relation lattice.
    pub fn element_order_dividing(&self, v: &[BigInt], n: u64) -> Option<u64> {
        assert_eq!(v.len(), self.rank);
        let lattice = self.relation_hnf();
        let mut divisors: Vec<u64> = (1..=n).filter(|q| n.is_multiple_of(*q)).collect();
        divisors.sort_unstable();
        for q in divisors {
            let scaled: Vec<BigInt> = v.iter().map(|x| x * BigInt::from(q)).collect();
            if hnf_contains(&lattice, &scaled) {
                return Some(q);
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let inv = self.invariant_factors();
        json!({
            "invariant_factors": inv.torsion.iter().map(biguint_json).collect::<Vec<_>>(),
            "free_rank": inv.free_rank,
            "order": inv.order().to_string(),
        })
    }
}

pub fn biguint_json(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}

/// A homomorphism between presented groups, stored as the integer matrix of
/// the underlying map on ambient generators. Construction certifies that the
/// matrix carries the source relation lattice into the target relation
/// lattice, so it genuinely descends to the quotients.
#[derive(Clone, Debug)]
pub struct GroupMap {
    source: AbGroupPresentation,
    target: AbGroupPresentation,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn induced(
        matrix: IntMatrix,
        source: &AbGroupPresentation,
        target: &AbGroupPresentation,
    ) -> Result<Self> {
        if matrix.nrows() != target.rank() || matrix.ncols() != source.rank() {
            return Err(Error::Usage(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.rank(),
                source.rank()
            )));
        }
        let target_lattice = target.relation_hnf();
        let mapped = matrix.mul(source.relations());
        for j in 0..mapped.ncols() {
            let col = mapped.column(j);
            if !hnf_contains(&target_lattice, &col) {
                return Err(Error::NotWellDefined { witness: col });
            }
        }
        Ok(GroupMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(g: &AbGroupPresentation) -> Self {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.rank()),
        }
    }

    pub fn source(&self) -> &AbGroupPresentation {
        &self.source
    }

    pub fn target(&self) -> &AbGroupPresentation {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupMap) -> Result<GroupMap> {
        if !inner.target.same_group(&self.source) {
            return Err(Error::Usage("composition of non-composable group maps".into()));
        }
        GroupMap::induced(self.matrix.mul(&inner.matrix), &inner.source, &self.target)
    }

    /// Generators of the full preimage lattice `{ x : matrix·x ∈ L_target }`.
    fn preimage_lattice(&self) -> IntMatrix {
        preimage_lattice(&self.matrix, self.target.relations())
    }

    /// Injective on the quotients: the preimage of the target relations is no
    /// bigger than the source relations.
    pub fn is_injective(&self) -> bool {
        let pre = self.preimage_lattice();
        let source_lattice = self.source.relation_hnf();
        hnf_contains_all(&source_lattice, &pre)
    }

    /// Surjective on the quotients: image plus target relations fill `Z^r`.
    pub fn is_surjective(&self) -> bool {
        let stacked = self.matrix.hstack(self.target.relations());
        let p = AbGroupPresentation { rank: self.target.rank(), relations: stacked };
        p.is_trivial()
    }

    /// Order of the image subgroup in the target quotient.
    pub fn image_order(&self) -> GroupOrder {
        let span = hnf_basis(&self.matrix.hstack(self.target.relations()));
        if span.ncols() == 0 {
            return GroupOrder::Finite(BigUint::one());
        }
        // Express the target relations in the basis of the combined span;
        // exactness is guaranteed because the relations sit inside the span.
        let s = snf(&span);
        let rel_in_span = s
            .solve_matrix(self.target.relations())
            .expect("target relations lie in their own span");
        let quotient = AbGroupPresentation { rank: span.ncols(), relations: rel_in_span };
        quotient.order()
    }

    /// Equal as maps on the quotients: same source and target lattices, and
    /// the matrix difference maps into the target relations columnwise.
    pub fn eq_as_maps(&self, other: &GroupMap) -> bool {
        if !self.source.same_group(&other.source) || !self.target.same_group(&other.target) {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        let target_lattice = self.target.relation_hnf();
        hnf_contains_all(&target_lattice, &diff)
    }
}

fn preimage_lattice(matrix: &IntMatrix, target_relations: &IntMatrix) -> IntMatrix {
    let stacked = matrix.hstack(target_relations);
    let kernel = snf(&stacked).kernel_basis();
    // Project kernel basis vectors onto the source block; projections of a
    // generating set generate the projected lattice.
    let cols: Vec<Vec<BigInt>> = (0..kernel.ncols())
        .map(|j| (0..matrix.ncols()).map(|i| kernel[(i, j)].clone()).collect())
        .collect();
    IntMatrix::from_columns(matrix.ncols(), &cols)
}

/// Exactness report for `0 → A → B → C → 0` given the two inner maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesReport {
    pub left_injective: bool,
    pub composite_zero: bool,
    pub exact_at_middle: bool,
    pub right_surjective: bool,
}

impl SesReport {
    pub fn all(&self) -> bool {
        self.left_injective && self.composite_zero && self.exact_at_middle && self.right_surjective
    }
}

impl fmt::Display for SesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "left injective: {}, composite zero: {}, exact at middle: {}, right surjective: {}",
            self.left_injective, self.composite_zero, self.exact_at_middle, self.right_surjective
        )
    }
}

/// Check the two-map sequence `A --f--> B --g--> C` for short exactness.
pub fn ses_check(f: &GroupMap, g: &GroupMap) -> Result<SesReport> {
    if !f.target().same_group(g.source()) {
        return Err(Error::Usage("ses_check: maps are not composable".into()));
    }
    let left_injective = f.is_injective();
    let right_surjective = g.is_surjective();

    let composite = g.matrix().mul(f.matrix());
    let c_lattice = g.target().relation_hnf();
    let composite_zero = hnf_contains_all(&c_lattice, &composite);

    // ker(g) = im(f) inside B, as lattices containing the B-relations.
    let kernel_lattice = preimage_lattice(g.matrix(), g.target().relations());
    let kernel_with_rel = hnf_basis(&kernel_lattice.hstack(g.source().relations()));
    let image_with_rel = hnf_basis(&f.matrix().hstack(f.target().relations()));
    let exact_at_middle = kernel_with_rel == image_with_rel;

    Ok(SesReport { left_injective, composite_zero, exact_at_middle, right_surjective })
}
