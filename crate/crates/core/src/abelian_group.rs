//! Finite abelian groups in invariant-factor form, their characters,
//! subgroups, annihilators and quotients.
//!
//! Groups here are tiny (desk scale), so subgroups and cosets are stored as
//! explicit element sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycError, CycScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic factor orders must be at least 1, got {0}")]
    BadFactor(u64),
    #[error("element {element} does not belong to {group}")]
    NotAMember { element: String, group: String },
    #[error("character {character} does not belong to the dual of {group}")]
    NotACharacter { character: String, group: String },
    #[error("set is not closed under the group operation")]
    NotClosed,
    #[error("set does not contain the identity")]
    MissingIdentity,
    #[error("subgroup belongs to a different group")]
    ForeignSubgroup,
    #[error("cyclotomic order {order} is not a multiple of the group exponent {exponent}")]
    FieldTooSmall { order: u32, exponent: u64 },
    #[error("cannot parse group `{0}`: expected something like Z2xZ4")]
    ParseGroup(String),
    #[error("cannot parse element `{text}`: {reason}")]
    ParseElement { text: String, reason: String },
    #[error(transparent)]
    Field(#[from] CycError),
}

/// An element of ℤ_{n₁} × … × ℤ_{n_k}, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A character of G, stored by its exponents: χ(g) = ∏ ζ_{nᵢ}^{cᵢaᵢ}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character(pub Vec<u64>);

impl Character {
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ{}", GroupElement(self.0.clone()))
    }
}

/// A finite abelian group ℤ_{n₁} × … × ℤ_{n_k} with n₁ | n₂ | … | n_k, nᵢ ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// The isomorphism from a user-supplied cyclic product onto its normal form.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// Cyclic orders as written by the user.
    pub written: Vec<u64>,
    pub group: FiniteAbelianGroup,
    /// Image of the i-th written generator.
    images: Vec<GroupElement>,
}

impl Presentation {
    /// Map a tuple of exponents in the written coordinates into the normal form.
    pub fn element(&self, written: &[i64]) -> Result<GroupElement, GroupError> {
        if written.len() != self.written.len() {
            return Err(GroupError::ParseElement {
                text: format!("{written:?}"),
                reason: format!("expected {} coordinates", self.written.len()),
            });
        }
        let mut acc = self.group.identity();
        for (a, img) in written.iter().zip(&self.images) {
            acc = self.group.mul(&acc, &self.group.pow(img, *a))?;
        }
        Ok(acc)
    }
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Chinese remaindering: y ≡ x (mod q) and y ≡ 0 (mod d/q), for coprime q, d/q.
fn crt_embed(x: u64, q: u64, d: u64) -> u64 {
    let r = d / q;
    // r·(r⁻¹ mod q)·x
    let inv = {
        let g = (r as i64).extended_gcd(&(q as i64));
        debug_assert_eq!(g.gcd, 1);
        g.x.rem_euclid(q as i64) as u64
    };
    ((r % d) * ((inv * (x % q)) % q)) % d
}

impl FiniteAbelianGroup {
    /// The trivial group.
    pub fn trivial() -> Self {
        Self { factors: vec![] }
    }

    /// Normalize an arbitrary product of cyclic groups ℤ_{a₁} × … into
    /// invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        Ok(Self::presentation(orders)?.group)
    }

    /// Like [`Self::from_cyclic_orders`], also returning the coordinate change.
    pub fn presentation(orders: &[u64]) -> Result<Presentation, GroupError> {
        if let Some(&bad) = orders.iter().find(|&&a| a == 0) {
            return Err(GroupError::BadFactor(bad));
        }
        // For every prime, the prime-power parts with the written factor they came from.
        let mut by_prime: BTreeMap<u64, Vec<(u64, usize)>> = BTreeMap::new();
        for (idx, &a) in orders.iter().enumerate() {
            for (p, e) in prime_powers(a) {
                by_prime.entry(p).or_default().push((p.pow(e), idx));
            }
        }
        let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
        for parts in by_prime.values_mut() {
            parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        }
        // Invariant factor j (counted from the largest) collects the j-th
        // largest power of every prime.
        let mut factors_desc = vec![1u64; k];
        for parts in by_prime.values() {
            for (j, (q, _)) in parts.iter().enumerate() {
                factors_desc[j] *= q;
            }
        }
        let factors: Vec<u64> = factors_desc.iter().rev().copied().collect();
        let group = Self {
            factors: factors.clone(),
        };
        let mut images = vec![vec![0u64; k]; orders.len()];
        for parts in by_prime.values() {
            for (j, &(q, idx)) in parts.iter().enumerate() {
                let slot = k - 1 - j;
                let d = factors[slot];
                // A generator of ℤ_a reduces to 1 in each of its prime-power
                // parts ℤ_q, which sits inside ℤ_d through CRT.
                let y = crt_embed(1, q, d);
                images[idx][slot] = (images[idx][slot] + y) % d;
            }
        }
        let images = images.into_iter().map(GroupElement).collect();
        Ok(Presentation {
            written: orders.to_vec(),
            group,
            images,
        })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &n| acc.lcm(&n))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cyclotomic order used for character values: lcm(exponent, 4).
    pub fn field_order(&self) -> u32 {
        self.exponent().lcm(&4) as u32
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn trivial_character(&self) -> Character {
        Character(vec![0; self.factors.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.factors.len() && g.0.iter().zip(&self.factors).all(|(a, n)| a < n)
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::NotAMember {
                element: g.to_string(),
                group: self.to_string(),
            })
        }
    }

    fn check_char(&self, chi: &Character) -> Result<(), GroupError> {
        if chi.0.len() == self.factors.len()
            && chi.0.iter().zip(&self.factors).all(|(a, n)| a < n)
        {
            Ok(())
        } else {
            Err(GroupError::NotACharacter {
                character: chi.to_string(),
                group: self.to_string(),
            })
        }
    }

    /// Reduce arbitrary integer exponents into an element.
    pub fn element(&self, exps: &[i64]) -> Result<GroupElement, GroupError> {
        if exps.len() != self.factors.len() {
            return Err(GroupError::NotAMember {
                element: format!("{exps:?}"),
                group: self.to_string(),
            });
        }
        Ok(GroupElement(
            exps.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| a.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul_unchecked(g, h))
    }

    pub(crate) fn mul_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&self.factors)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        )
    }

    /// g⁻¹h, the degree of a matrix unit between rows labelled g and h.
    pub fn quotient_of(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.mul_unchecked(&self.inverse(g), h)
    }

    pub fn pow(&self, g: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    pub fn element_order(&self, g: &GroupElement) -> u64 {
        g.0.iter()
            .zip(&self.factors)
            .map(|(&a, &n)| n / a.gcd(&n))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![GroupElement(vec![])];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|g| {
                    (0..n).map(move |a| {
                        let mut v = g.0.clone();
                        v.push(a);
                        GroupElement(v)
                    })
                })
                .collect();
        }
        out
    }

    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(|g| Character(g.0)).collect()
    }

    pub fn char_mul(&self, a: &Character, b: &Character) -> Character {
        Character(self.mul_unchecked(&GroupElement(a.0.clone()), &GroupElement(b.0.clone())).0)
    }

    pub fn char_inverse(&self, a: &Character) -> Character {
        Character(self.inverse(&GroupElement(a.0.clone())).0)
    }

    /// The exponent k with χ(g) = ζ_m^k.
    pub fn char_exponent(&self, chi: &Character, g: &GroupElement, m: u32) -> Result<u64, GroupError> {
        self.check_char(chi)?;
        self.check(g)?;
        let m = m as u64;
        if m == 0 || m % self.exponent() != 0 {
            return Err(GroupError::FieldTooSmall {
                order: m as u32,
                exponent: self.exponent(),
            });
        }
        Ok(chi
            .0
            .iter()
            .zip(&g.0)
            .zip(&self.factors)
            .map(|((c, a), n)| (c * a % n) * (m / n))
            .sum::<u64>()
            % m)
    }

    /// χ(g) as an element of ℚ(ζ_m).
    pub fn char_eval(&self, chi: &Character, g: &GroupElement, m: u32) -> Result<CycScalar, GroupError> {
        let k = self.char_exponent(chi, g, m)?;
        Ok(CycScalar::root_of_unity(k as i64, m)?)
    }

    /// Λ⊥ = {g : λ(g) = 1 for all λ ∈ Λ}. Λ must itself be a subgroup of Ĝ.
    pub fn annihilator(&self, lambda: &[Character]) -> Result<Subgroup, GroupError> {
        let set: BTreeSet<Character> = lambda.iter().cloned().collect();
        for c in &set {
            self.check_char(c)?;
        }
        if !set.contains(&self.trivial_character()) {
            return Err(GroupError::MissingIdentity);
        }
        for a in &set {
            for b in &set {
                if !set.contains(&self.char_mul(a, b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        let m = self.exponent().max(1) as u32;
        let mut elems = BTreeSet::new();
        for g in self.elements() {
            let mut ok = true;
            for c in &set {
                if self.char_exponent(c, &g, m)? != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                elems.insert(g);
            }
        }
        Subgroup::new(self, elems)
    }

    /// H⊥ in Ĝ: the characters trivial on H.
    pub fn dual_annihilator(&self, h: &Subgroup) -> Result<Vec<Character>, GroupError> {
        if h.parent != *self {
            return Err(GroupError::ForeignSubgroup);
        }
        let m = self.exponent().max(1) as u32;
        let mut out = Vec::new();
        for c in self.characters() {
            let mut ok = true;
            for g in &h.elements {
                if self.char_exponent(&c, g, m)? != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
        for g in gens {
            self.check(g)?;
        }
        let mut set: BTreeSet<GroupElement> = BTreeSet::from([self.identity()]);
        let mut frontier: Vec<GroupElement> = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul_unchecked(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Subgroup::new(self, set)
    }

    /// Every subgroup, found as the distinct subgroups generated by pairs of
    /// elements plus closure under joins. Intended for groups of order ≤ 64.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let elems = self.elements();
        let mut found: BTreeSet<BTreeSet<GroupElement>> = BTreeSet::new();
        let mut queue: Vec<Vec<GroupElement>> = vec![vec![]];
        while let Some(gens) = queue.pop() {
            let sub = self.generated(&gens).expect("members of the group");
            if !found.insert(sub.elements.clone()) {
                continue;
            }
            for g in &elems {
                if !sub.elements.contains(g) {
                    let mut next = gens.clone();
                    next.push(g.clone());
                    queue.push(next);
                }
            }
        }
        found
            .into_iter()
            .map(|e| Subgroup {
                parent: self.clone(),
                elements: e,
            })
            .collect()
    }

    pub fn quotient(&self, h: &Subgroup) -> Result<QuotientGroup, GroupError> {
        if h.parent != *self {
            return Err(GroupError::ForeignSubgroup);
        }
        Subgroup::new(self, h.elements.clone())?;
        let mut coset_of: BTreeMap<GroupElement, usize> = BTreeMap::new();
        let mut cosets: Vec<Vec<GroupElement>> = Vec::new();
        for g in self.elements() {
            if coset_of.contains_key(&g) {
                continue;
            }
            let idx = cosets.len();
            let mut coset: Vec<GroupElement> =
                h.elements.iter().map(|x| self.mul_unchecked(&g, x)).collect();
            coset.sort();
            for x in &coset {
                coset_of.insert(x.clone(), idx);
            }
            cosets.push(coset);
        }
        let n = cosets.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = self.mul_unchecked(&cosets[i][0], &cosets[j][0]);
                table[i][j] = coset_of[&p];
            }
        }
        Ok(QuotientGroup {
            parent: self.clone(),
            cosets,
            coset_of,
            table,
        })
    }

    /// The elements of order exactly 2.
    pub fn involutions(&self) -> Vec<GroupElement> {
        self.elements()
            .into_iter()
            .filter(|g| self.element_order(g) == 2)
            .collect()
    }

    /// Parse an element written `(a1,...,ak)`; exponents are reduced.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| GroupError::ParseElement {
                text: text.to_string(),
                reason: "expected (a1,...,ak)".into(),
            })?;
        let exps: Vec<i64> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| GroupError::ParseElement {
                    text: text.to_string(),
                    reason: "exponents must be integers".into(),
                })?
        };
        if exps.len() != self.rank() {
            return Err(GroupError::ParseElement {
                text: text.to_string(),
                reason: format!("{} has rank {}", self, self.rank()),
            });
        }
        self.element(&exps)
    }

    /// Parse a comma-separated list of elements, e.g. `(0,0),(0,1)`.
    pub fn parse_elements(&self, text: &str) -> Result<Vec<GroupElement>, GroupError> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in text.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                    if depth == 0 {
                        out.push(self.parse_element(&cur)?);
                        cur.clear();
                    }
                }
                ',' if depth == 0 => {}
                c if c.is_whitespace() && depth == 0 => {}
                c => {
                    if depth == 0 {
                        return Err(GroupError::ParseElement {
                            text: text.to_string(),
                            reason: format!("unexpected `{c}`"),
                        });
                    }
                    cur.push(c)
                }
            }
        }
        if depth != 0 {
            return Err(GroupError::ParseElement {
                text: text.to_string(),
                reason: "unbalanced parentheses".into(),
            });
        }
        Ok(out)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = GroupError;

    /// Accepts `Z2xZ4`, `z3`, `Z2 x Z2`, `Z1` or `trivial`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_cyclic_orders(s).and_then(|o| Self::from_cyclic_orders(&o))
    }
}

/// The cyclic orders exactly as written in a `Z2xZ4`-style string.
pub fn parse_cyclic_orders(s: &str) -> Result<Vec<u64>, GroupError> {
    let t = s.trim().to_ascii_lowercase();
    if t == "trivial" || t == "1" {
        return Ok(vec![]);
    }
    let mut orders = Vec::new();
    for part in t.split('x') {
        let p = part.trim();
        let n: u64 = p
            .strip_prefix('z')
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| GroupError::ParseGroup(s.to_string()))?;
        if n == 0 {
            return Err(GroupError::ParseGroup(s.to_string()));
        }
        if n > 1 {
            orders.push(n);
        }
    }
    Ok(orders)
}

/// A subgroup stored as an explicit element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    elements: BTreeSet<GroupElement>,
}

impl Subgroup {
    pub fn new(parent: &FiniteAbelianGroup, elements: BTreeSet<GroupElement>) -> Result<Self, GroupError> {
        for g in &elements {
            parent.check(g)?;
        }
        if !elements.contains(&parent.identity()) {
            return Err(GroupError::MissingIdentity);
        }
        for a in &elements {
            for b in &elements {
                if !elements.contains(&parent.mul_unchecked(a, b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(Self {
            parent: parent.clone(),
            elements,
        })
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn elements(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }
}

/// G/H as an explicit coset table. Coset 0 always contains the identity.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    parent: FiniteAbelianGroup,
    cosets: Vec<Vec<GroupElement>>,
    coset_of: BTreeMap<GroupElement, usize>,
    table: Vec<Vec<usize>>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    pub fn cosets(&self) -> &[Vec<GroupElement>] {
        &self.cosets
    }

    /// The projection G → G/H.
    pub fn project(&self, g: &GroupElement) -> usize {
        self.coset_of[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    fn coset_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The isomorphism type of G/H in invariant-factor form.
    pub fn normalized(&self) -> FiniteAbelianGroup {
        let n = self.order() as u64;
        let orders: Vec<u64> = (0..self.order()).map(|a| self.coset_order(a) as u64).collect();
        // |Q[p^k]| = p^{Σ min(k, eᵢ)} determines the partition of each p-part.
        let mut cyclic = Vec::new();
        for (p, e_total) in prime_powers(n) {
            let mut prev = 0u32;
            let mut parts_ge: Vec<u32> = Vec::new();
            for k in 1..=e_total {
                let pk = p.pow(k);
                let cnt = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let ck = (cnt as f64).log(p as f64).round() as u32;
                parts_ge.push(ck - prev);
                prev = ck;
            }
            // parts_ge[k-1] = number of cyclic p-parts with exponent ≥ k.
            for k in 1..=e_total as usize {
                let ge_k = parts_ge[k - 1];
                let ge_next = parts_ge.get(k).copied().unwrap_or(0);
                for _ in 0..(ge_k - ge_next) {
                    cyclic.push(p.pow(k as u32));
                }
            }
        }
        FiniteAbelianGroup::from_cyclic_orders(&cyclic).expect("positive orders")
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }
}
