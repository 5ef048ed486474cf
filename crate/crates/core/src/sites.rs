//! Site sets as machine-word bitmasks.
//!
//! Lattices have at most [`MAX_SITES`] sites, so every finite configuration,
//! volume, boundary, bond and edge fits into a `u32` mask. The derived `Ord`
//! (ascending numeric mask value) is the canonical total order used for bond
//! lists and edge sets; sites within a set are always visited in ascending
//! index order.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Index of a lattice site, `0..MAX_SITES`.
pub type Site = usize;

/// Hard cap on the lattice size; keeps every subset a `u32` bitmask.
pub const MAX_SITES: usize = 30;

/// A subset of lattice sites, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SiteSet(u32);

impl SiteSet {
    /// The empty set.
    pub const EMPTY: SiteSet = SiteSet(0);

    /// `{site}`.
    pub fn singleton(site: Site) -> Self {
        assert!(site < MAX_SITES, "site index {site} out of range");
        SiteSet(1 << site)
    }

    /// `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SITES, "lattice size {n} exceeds {MAX_SITES}");
        SiteSet(if n == 0 { 0 } else { u32::MAX >> (32 - n) })
    }

    pub fn from_mask(mask: u32) -> Self {
        assert!(mask < (1 << MAX_SITES), "mask uses sites beyond {MAX_SITES}");
        SiteSet(mask)
    }

    pub fn from_sites<I: IntoIterator<Item = Site>>(sites: I) -> Self {
        sites.into_iter().fold(SiteSet::EMPTY, |s, x| s.insert(x))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, site: Site) -> bool {
        site < MAX_SITES && self.0 & (1 << site) != 0
    }

    #[must_use]
    pub fn insert(self, site: Site) -> Self {
        self | SiteSet::singleton(site)
    }

    #[must_use]
    pub fn remove(self, site: Site) -> Self {
        SiteSet(self.0 & !SiteSet::singleton(site).0)
    }

    pub fn union(self, other: Self) -> Self {
        SiteSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SiteSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SiteSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_site(self) -> Option<Site> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as Site)
    }

    pub fn max_site(self) -> Option<Site> {
        (!self.is_empty()).then(|| 31 - self.0.leading_zeros() as Site)
    }

    /// Sites of `self` strictly below `site` in the canonical site order.
    pub fn sites_below(self, site: Site) -> Self {
        let low = if site >= 32 { u32::MAX } else { (1u32 << site) - 1 };
        SiteSet(self.0 & low)
    }

    /// Iterates the sites in ascending index order.
    pub fn sites(self) -> Sites {
        Sites(self.0)
    }

    /// Iterates all `2^len` subsets of `self` in ascending mask order,
    /// starting with the empty set and ending with `self`.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, cur: 0, done: false }
    }

    /// The `index`-th subset of `self` in ascending mask order.
    ///
    /// Bit `k` of `index` decides whether the `k`-th lowest site of `self`
    /// is present, which makes the map monotone in the mask value.
    pub fn nth_subset(self, index: u32) -> Self {
        let mut rest = self.0;
        let mut bits = index;
        let mut out = 0;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            if bits & 1 == 1 {
                out |= low;
            }
            bits >>= 1;
            rest ^= low;
        }
        assert!(bits == 0, "subset index {index} out of range");
        SiteSet(out)
    }

    /// Inverse of [`SiteSet::nth_subset`]: the rank of `sub` among the
    /// subsets of `self`. Panics if `sub ⊄ self`.
    pub fn subset_index(self, sub: Self) -> u32 {
        assert!(sub.is_subset_of(self), "{sub:?} is not a subset of {self:?}");
        let mut rest = self.0;
        let mut out = 0;
        let mut bit = 0;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            if sub.0 & low != 0 {
                out |= 1 << bit;
            }
            bit += 1;
            rest ^= low;
        }
        out
    }
}

impl BitOr for SiteSet {
    type Output = SiteSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for SiteSet {
    type Output = SiteSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for SiteSet {
    type Output = SiteSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.sites().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Site> for SiteSet {
    fn from_iter<I: IntoIterator<Item = Site>>(iter: I) -> Self {
        SiteSet::from_sites(iter)
    }
}

/// Ascending-site iterator, see [`SiteSet::sites`].
pub struct Sites(u32);

impl Iterator for Sites {
    type Item = Site;

    fn next(&mut self) -> Option<Site> {
        if self.0 == 0 {
            return None;
        }
        let site = self.0.trailing_zeros() as Site;
        self.0 &= self.0 - 1;
        Some(site)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Sites {}

/// Ascending-mask subset iterator, see [`SiteSet::subsets`].
pub struct Subsets {
    mask: u32,
    cur: u32,
    done: bool,
}

impl Iterator for Subsets {
    type Item = SiteSet;

    fn next(&mut self) -> Option<SiteSet> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if out == self.mask {
            self.done = true;
        } else {
            // Ripples through the positions of `mask` like binary increment.
            self.cur = self.cur.wrapping_sub(self.mask) & self.mask;
        }
        Some(SiteSet(out))
    }
}
