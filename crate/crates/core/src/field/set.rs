use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::bitmap::Bitmap;
use crate::field::prime::Prime;

/// A subset of `Z_p`, stored as a membership bitmap of length `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpSet {
    modulus: Prime,
    members: Bitmap,
    card: usize,
}

impl FpSet {
    pub fn empty(modulus: &Prime) -> Self {
        FpSet {
            modulus: modulus.clone(),
            members: Bitmap::new(modulus.size()),
            card: 0,
        }
    }

    /// The whole field `Z_p`.
    pub fn full(modulus: &Prime) -> Self {
        FpSet {
            modulus: modulus.clone(),
            members: Bitmap::full(modulus.size()),
            card: modulus.size(),
        }
    }

    /// `Z_p^*`.
    pub fn units(modulus: &Prime) -> Self {
        Self::full(modulus).without_zero()
    }

    pub fn singleton(modulus: &Prime, x: u64) -> Result<Self> {
        Self::from_elements(modulus, [x])
    }

    /// Builds a set from elements that must already lie in `[0, p)`.
    /// Duplicates are ignored.
    pub fn from_elements<I: IntoIterator<Item = u64>>(modulus: &Prime, elements: I) -> Result<Self> {
        let mut members = Bitmap::new(modulus.size());
        for x in elements {
            members.set(modulus.check_element(x)? as usize);
        }
        Ok(Self::from_bitmap(modulus, members))
    }

    /// Builds a set from arbitrary integers, reduced modulo `p`.
    pub fn from_residues<I: IntoIterator<Item = i64>>(modulus: &Prime, elements: I) -> Self {
        let p = modulus.get() as i64;
        let mut members = Bitmap::new(modulus.size());
        for x in elements {
            members.set(x.rem_euclid(p) as usize);
        }
        Self::from_bitmap(modulus, members)
    }

    pub(crate) fn from_bitmap(modulus: &Prime, members: Bitmap) -> Self {
        debug_assert_eq!(members.len(), modulus.size());
        let card = members.count_ones();
        FpSet {
            modulus: modulus.clone(),
            members,
            card,
        }
    }

    #[inline]
    pub fn modulus(&self) -> &Prime {
        &self.modulus
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.modulus.get()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x < self.p() && self.members.get(x as usize)
    }

    pub(crate) fn bitmap(&self) -> &Bitmap {
        &self.members
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter_ones().map(|x| x as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Indicator vector of length `p`.
    pub fn indicator(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.modulus.size()];
        for x in self.members.iter_ones() {
            v[x] = 1;
        }
        v
    }

    pub fn insert(&mut self, x: u64) -> Result<()> {
        let x = self.modulus.check_element(x)? as usize;
        if !self.members.get(x) {
            self.members.set(x);
            self.card += 1;
        }
        Ok(())
    }

    pub fn remove(&mut self, x: u64) {
        if self.contains(x) {
            self.members.unset(x as usize);
            self.card -= 1;
        }
    }

    /// `Y^* = Y \ {0}`.
    pub fn without_zero(&self) -> Self {
        let mut out = self.clone();
        out.remove(0);
        out
    }

    pub fn union(&self, other: &FpSet) -> Result<FpSet> {
        self.modulus.ensure_same(&other.modulus)?;
        let mut m = self.members.clone();
        m.or_assign(&other.members);
        Ok(Self::from_bitmap(&self.modulus, m))
    }

    pub fn difference(&self, other: &FpSet) -> Result<FpSet> {
        self.modulus.ensure_same(&other.modulus)?;
        let mut m = self.members.clone();
        m.and_not_assign(&other.members);
        Ok(Self::from_bitmap(&self.modulus, m))
    }

    pub fn intersection_len(&self, other: &FpSet) -> Result<usize> {
        self.modulus.ensure_same(&other.modulus)?;
        Ok(self.members.intersection_count(&other.members))
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.modulus == other.modulus && self.members.is_subset(&other.members)
    }

    pub(crate) fn ensure_same(&self, other: &FpSet) -> Result<()> {
        self.modulus.ensure_same(&other.modulus)
    }

    pub(crate) fn ensure_nonempty(&self, what: &'static str) -> Result<()> {
        if self.is_empty() {
            Err(Error::Empty(what))
        } else {
            Ok(())
        }
    }

    pub fn to_json(&self) -> SetJson {
        SetJson {
            p: self.p(),
            elements: self.to_vec(),
        }
    }

    /// Parses `{"p": .., "elements": [..]}`, validating the modulus against `cap`.
    pub fn from_json(json: &SetJson, cap: u64) -> Result<FpSet> {
        let prime = Prime::with_cap(json.p, cap)?;
        FpSet::from_elements(&prime, json.elements.iter().copied())
    }
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpSet(p={}, ", self.p())?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

/// Wire form of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetJson {
    pub p: u64,
    pub elements: Vec<u64>,
}

impl Serialize for FpSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
