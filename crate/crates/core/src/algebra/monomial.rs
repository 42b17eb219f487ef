use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::coeff::Coeff;

use super::atom::PotentialAtom;
use super::index::{CanonicalIndex, FormalSymbol, Kind, SymbolFamily};
use super::AlgebraError;

/// A normal-ordered product `symbols · positions · atoms · momenta`.
///
/// `factors` is strictly sorted by [`CanonicalIndex`] ordering, which puts
/// every position before every momentum. Atoms are functions of positions and
/// commute with them, so they sit between the two blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub symbols: Vec<(FormalSymbol, u32)>,
    pub factors: Vec<(CanonicalIndex, u32)>,
    pub atoms: Vec<PotentialAtom>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.symbols.is_empty() && self.factors.is_empty() && self.atoms.is_empty()
    }

    pub fn from_index(idx: CanonicalIndex) -> Self {
        Monomial { factors: vec![(idx, 1)], ..Default::default() }
    }

    pub fn from_symbol(sym: FormalSymbol) -> Self {
        Monomial { symbols: vec![(sym, 1)], ..Default::default() }
    }

    pub fn from_atom(atom: PotentialAtom) -> Self {
        Monomial { atoms: vec![atom], ..Default::default() }
    }

    pub fn positions(&self) -> impl Iterator<Item = &(CanonicalIndex, u32)> {
        self.factors.iter().filter(|(i, _)| i.kind == Kind::Position)
    }

    pub fn momenta(&self) -> impl Iterator<Item = &(CanonicalIndex, u32)> {
        self.factors.iter().filter(|(i, _)| i.kind == Kind::Momentum)
    }

    pub fn rotation_degree(&self) -> u32 {
        self.symbols
            .iter()
            .filter(|(s, _)| s.family == SymbolFamily::Rotation)
            .map(|(_, e)| *e)
            .sum()
    }

    /// Total degree in canonical operators.
    pub fn operator_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| *e).sum()
    }

    pub fn has_symbols(&self) -> bool {
        !self.symbols.is_empty()
    }

    /// Normal-ordered expansion of `self · other` using `[z_jα, p_kβ] = i δ_jk δ_αβ`.
    ///
    /// Returns an empty list when the product vanishes by θ-nilpotency.
    pub fn product(&self, other: &Monomial) -> Result<Vec<(Monomial, Coeff)>, AlgebraError> {
        for (p, _) in self.momenta() {
            if let Some(atom) = other.atoms.iter().find(|a| a.depends_on(p.particle)) {
                return Err(AlgebraError::NonPolynomialCommutator {
                    momentum: *p,
                    atom: atom.name.clone(),
                });
            }
        }

        let symbols = merge_exponents(&self.symbols, &other.symbols);
        let theta: u32 = symbols
            .iter()
            .filter(|(s, _)| s.family == SymbolFamily::Rotation)
            .map(|(_, e)| *e)
            .sum();
        if theta >= 2 {
            return Ok(Vec::new());
        }

        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        atoms.sort();

        // Left momenta must move through right positions.
        let left_mom: BTreeMap<(usize, usize), u32> =
            self.momenta().map(|(i, e)| (i.dof(), *e)).collect();
        let right_pos: BTreeMap<(usize, usize), u32> =
            other.positions().map(|(i, e)| (i.dof(), *e)).collect();

        let mut partials: Vec<(Coeff, BTreeMap<(usize, usize), u32>, BTreeMap<(usize, usize), u32>)> =
            vec![(Coeff::one(), left_mom.clone(), right_pos.clone())];
        for (dof, &a) in &left_mom {
            let Some(&b) = right_pos.get(dof) else { continue };
            let mut next = Vec::with_capacity(partials.len() * (a.min(b) as usize + 1));
            for (c, mom, pos) in &partials {
                for k in 0..=a.min(b) {
                    let weight = reorder_weight(a, b, k);
                    let mut mom = mom.clone();
                    let mut pos = pos.clone();
                    set_or_remove(&mut mom, *dof, a - k);
                    set_or_remove(&mut pos, *dof, b - k);
                    next.push((c * &weight, mom, pos));
                }
            }
            partials = next;
        }

        let mut out = Vec::with_capacity(partials.len());
        for (c, mom, pos) in partials {
            let mut factors: BTreeMap<CanonicalIndex, u32> = BTreeMap::new();
            for (i, e) in self.positions() {
                *factors.entry(*i).or_insert(0) += e;
            }
            for ((j, a), e) in pos {
                *factors.entry(CanonicalIndex::z(j, a)).or_insert(0) += e;
            }
            for ((j, a), e) in mom {
                *factors.entry(CanonicalIndex::p(j, a)).or_insert(0) += e;
            }
            for (i, e) in other.momenta() {
                *factors.entry(*i).or_insert(0) += e;
            }
            out.push((
                Monomial { symbols: symbols.clone(), factors: factors.into_iter().collect(), atoms: atoms.clone() },
                c,
            ));
        }
        Ok(out)
    }
}

/// Coefficient of `z^{b−k} p^{a−k}` in the normal-ordered form of `p^a z^b`:
/// `k! · C(a,k) · C(b,k) · (−i)^k`.
fn reorder_weight(a: u32, b: u32, k: u32) -> Coeff {
    let n = factorial(k) * binomial(a, k) * binomial(b, k);
    Coeff::neg_i_pow(k).scale(&BigRational::from_integer(n))
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, x| acc * BigInt::from(x))
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut num = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
    }
    num / factorial(k)
}

fn set_or_remove(map: &mut BTreeMap<(usize, usize), u32>, key: (usize, usize), value: u32) {
    if value == 0 {
        map.remove(&key);
    } else {
        map.insert(key, value);
    }
}

pub(crate) fn merge_exponents<K: Ord + Copy>(a: &[(K, u32)], b: &[(K, u32)]) -> Vec<(K, u32)> {
    let mut m: BTreeMap<K, u32> = a.iter().copied().collect();
    for (k, e) in b {
        *m.entry(*k).or_insert(0) += e;
    }
    m.into_iter().collect()
}
