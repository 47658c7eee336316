//! Periodic L×L square lattice (genus-one torus).
//!
//! Sites are indexed row-major, `s = row * L + col`. Bond `s` is the
//! horizontal bond from site `s` to its right neighbour, bond `L² + s` the
//! vertical bond from `s` to the site one row up. Plaquette `p` is the face
//! whose lower-left corner is site `p`.

use crate::error::{Error, Result};

/// What an incidence query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    Star(usize),
    Plaquette(usize),
    Bond(usize),
}

/// Answer to an incidence query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    Bonds([usize; 4]),
    Sites([usize; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLattice {
    l: usize,
    stars: Vec<[usize; 4]>,
    plaquettes: Vec<[usize; 4]>,
    endpoints: Vec<[usize; 2]>,
}

impl TorusLattice {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::LatticeTooSmall(l));
        }
        let n = l * l;
        let site = |r: usize, c: usize| (r % l) * l + (c % l);
        let h = |r: usize, c: usize| site(r, c);
        let v = |r: usize, c: usize| n + site(r, c);

        let mut stars = Vec::with_capacity(n);
        let mut plaquettes = Vec::with_capacity(n);
        for r in 0..l {
            for c in 0..l {
                // right, left, up, down
                stars.push([h(r, c), h(r, c + l - 1), v(r, c), v(r + l - 1, c)]);
                // bottom, top, left, right edges of the face
                plaquettes.push([h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)]);
            }
        }
        let mut endpoints = Vec::with_capacity(2 * n);
        for r in 0..l {
            for c in 0..l {
                endpoints.push([site(r, c), site(r, c + 1)]);
            }
        }
        for r in 0..l {
            for c in 0..l {
                endpoints.push([site(r, c), site(r + 1, c)]);
            }
        }
        Ok(Self {
            l,
            stars,
            plaquettes,
            endpoints,
        })
    }

    /// Linear size.
    pub fn size(&self) -> usize {
        self.l
    }

    pub fn num_sites(&self) -> usize {
        self.l * self.l
    }

    pub fn num_bonds(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn num_plaquettes(&self) -> usize {
        self.l * self.l
    }

    pub fn site(&self, row: usize, col: usize) -> usize {
        (row % self.l) * self.l + (col % self.l)
    }

    /// Horizontal bond leaving `(row, col)` to the right.
    pub fn horizontal_bond(&self, row: usize, col: usize) -> usize {
        self.site(row, col)
    }

    /// Vertical bond leaving `(row, col)` upwards.
    pub fn vertical_bond(&self, row: usize, col: usize) -> usize {
        self.num_sites() + self.site(row, col)
    }

    pub fn is_horizontal(&self, bond: usize) -> bool {
        bond < self.num_sites()
    }

    /// Bonds around site `s` in the order right, left, up, down.
    pub fn star(&self, s: usize) -> Result<[usize; 4]> {
        self.stars.get(s).copied().ok_or(Error::IndexOutOfRange {
            what: "star",
            index: s,
            len: self.stars.len(),
        })
    }

    /// Bonds around face `p` in the order bottom, top, left, right.
    pub fn plaquette(&self, p: usize) -> Result<[usize; 4]> {
        self.plaquettes.get(p).copied().ok_or(Error::IndexOutOfRange {
            what: "plaquette",
            index: p,
            len: self.plaquettes.len(),
        })
    }

    /// Endpoints of bond `b`: for a horizontal bond (left, right), for a
    /// vertical bond (lower, upper).
    pub fn endpoints(&self, b: usize) -> Result<[usize; 2]> {
        self.endpoints.get(b).copied().ok_or(Error::IndexOutOfRange {
            what: "bond",
            index: b,
            len: self.endpoints.len(),
        })
    }

    pub fn incidence(&self, query: Query) -> Result<Incidence> {
        match query {
            Query::Star(s) => self.star(s).map(Incidence::Bonds),
            Query::Plaquette(p) => self.plaquette(p).map(Incidence::Bonds),
            Query::Bond(b) => self.endpoints(b).map(Incidence::Sites),
        }
    }

    pub(crate) fn bond_endpoints(&self) -> &[[usize; 2]] {
        &self.endpoints
    }

    /// For each site, the site at the other end of each of its four bonds
    /// (right, left, up, down). On L = 2 a neighbour appears twice.
    pub fn neighbor_table(&self) -> Vec<[usize; 4]> {
        (0..self.num_sites())
            .map(|s| {
                let r = s / self.l;
                let c = s % self.l;
                [
                    self.site(r, c + 1),
                    self.site(r, c + self.l - 1),
                    self.site(r + 1, c),
                    self.site(r + self.l - 1, c),
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        let lat = TorusLattice::new(2).unwrap();
        assert_eq!((lat.num_sites(), lat.num_bonds(), lat.num_plaquettes()), (4, 8, 4));
        let lat = TorusLattice::new(3).unwrap();
        assert_eq!((lat.num_sites(), lat.num_bonds(), lat.num_plaquettes()), (9, 18, 9));
    }

    #[test]
    fn rejects_l1() {
        assert_eq!(TorusLattice::new(1), Err(Error::LatticeTooSmall(1)));
        assert!(TorusLattice::new(0).is_err());
    }

    #[test]
    fn out_of_range() {
        let lat = TorusLattice::new(3).unwrap();
        assert!(lat.incidence(Query::Star(9)).is_err());
        assert!(lat.incidence(Query::Plaquette(9)).is_err());
        assert!(lat.incidence(Query::Bond(18)).is_err());
    }

    #[test]
    fn stars_have_four_distinct_bonds() {
        for l in 2..6 {
            let lat = TorusLattice::new(l).unwrap();
            for s in 0..lat.num_sites() {
                let set: HashSet<_> = lat.star(s).unwrap().into_iter().collect();
                assert_eq!(set.len(), 4);
                let set: HashSet<_> = lat.plaquette(s).unwrap().into_iter().collect();
                assert_eq!(set.len(), 4);
            }
        }
    }

    #[test]
    fn adjacent_stars_share_two_bonds_on_l2() {
        // Hand enumeration for L = 2: star 0 = {h0, h1, v0, v2},
        // star 1 = {h1, h0, v1, v3}. Bonds h = 0..4, v = 4..8.
        let lat = TorusLattice::new(2).unwrap();
        let mut s0 = lat.star(0).unwrap();
        let mut s1 = lat.star(1).unwrap();
        s0.sort();
        s1.sort();
        assert_eq!(s0, [0, 1, 4, 6]);
        assert_eq!(s1, [0, 1, 5, 7]);
        let shared = s0.iter().filter(|b| s1.contains(b)).count();
        assert_eq!(shared, 2);
    }

    #[test]
    fn horizontal_bond_endpoints_wrap() {
        let lat = TorusLattice::new(3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let b = lat.horizontal_bond(r, c);
                assert_eq!(lat.endpoints(b).unwrap(), [r * 3 + c, r * 3 + (c + 1) % 3]);
                assert!(lat.is_horizontal(b));
            }
        }
    }

    #[test]
    fn incidence_consistency() {
        for l in 2..6 {
            let lat = TorusLattice::new(l).unwrap();
            let mut in_stars = vec![0; lat.num_bonds()];
            let mut in_plaqs = vec![0; lat.num_bonds()];
            for s in 0..lat.num_sites() {
                for b in lat.star(s).unwrap() {
                    in_stars[b] += 1;
                    assert!(lat.endpoints(b).unwrap().contains(&s));
                }
                for b in lat.plaquette(s).unwrap() {
                    in_plaqs[b] += 1;
                }
            }
            assert!(in_stars.iter().all(|&k| k == 2));
            assert!(in_plaqs.iter().all(|&k| k == 2));
            for b in 0..lat.num_bonds() {
                let [x, y] = lat.endpoints(b).unwrap();
                assert_ne!(x, y);
                assert!(lat.star(x).unwrap().contains(&b));
                assert!(lat.star(y).unwrap().contains(&b));
            }
            let total: usize = (0..lat.num_sites()).map(|s| lat.star(s).unwrap().len()).sum();
            assert_eq!(total, 2 * lat.num_bonds());
        }
    }

    #[test]
    fn neighbor_table_matches_bonds() {
        let lat = TorusLattice::new(4).unwrap();
        let nbr = lat.neighbor_table();
        for s in 0..lat.num_sites() {
            let star = lat.star(s).unwrap();
            for k in 0..4 {
                let [x, y] = lat.endpoints(star[k]).unwrap();
                let other = if x == s { y } else { x };
                assert_eq!(nbr[s][k], other);
            }
        }
    }
}
