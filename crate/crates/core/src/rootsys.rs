//! Reduced root systems in simple-root coordinates.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("roots have inconsistent ranks")]
    RankMismatch,
    #[error("root set is not closed under negation")]
    NotSymmetric,
    #[error("unit vector e_{0} is not a root")]
    MissingSimpleRoot(usize),
    #[error("root {0:?} is neither positive nor negative")]
    MixedSigns(Vector),
    #[error("root set is not closed under simple reflections")]
    NotClosed,
    #[error("no consistent root lengths")]
    BadLengths,
    #[error("rank {0} is too large for automorphism search")]
    RankTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) => n,
            CartanType::G2 => 2,
        }
    }

    /// Gram matrix of the simple roots, short roots of squared length 2.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut g = vec![vec![0; n]; n];
        match *self {
            CartanType::A(_) => {
                for i in 0..n {
                    g[i][i] = 2;
                    if i + 1 < n {
                        g[i][i + 1] = -1;
                        g[i + 1][i] = -1;
                    }
                }
            }
            CartanType::B(_) | CartanType::C(_) => {
                let long_last = matches!(self, CartanType::C(_));
                for i in 0..n {
                    g[i][i] = 4;
                    if i + 1 < n {
                        g[i][i + 1] = -2;
                        g[i + 1][i] = -2;
                    }
                }
                if n > 1 {
                    if long_last {
                        for i in 0..n - 1 {
                            g[i][i] = 2;
                            if i + 2 < n {
                                g[i][i + 1] = -1;
                                g[i + 1][i] = -1;
                            }
                        }
                        g[n - 1][n - 1] = 4;
                    } else {
                        g[n - 1][n - 1] = 2;
                    }
                }
                if n == 1 {
                    g[0][0] = 2;
                }
            }
            CartanType::G2 => {
                g = vec![vec![2, -3], vec![-3, 6]];
            }
        }
        g
    }
}

/// Roots sorted lexicographically, with the invariant form and component data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    rank: usize,
    roots: Vec<Vector>,
    index: HashMap<Vector, usize>,
    gram: Vec<Vec<i64>>,
    lengths: Vec<u32>,
    component: Vec<usize>,
    bond: Vec<u32>,
}

fn pair(gram: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..a.len() {
        if a[i] == 0 {
            continue;
        }
        for j in 0..b.len() {
            s += a[i] * gram[i][j] * b[j];
        }
    }
    s
}

fn reflect(gram: &[Vec<i64>], i: usize, v: &[i64]) -> Vector {
    let n = v.len();
    let mut e = vec![0; n];
    e[i] = 1;
    let c = 2 * pair(gram, v, &e) / gram[i][i];
    let mut out = v.to_vec();
    out[i] -= c;
    out
}

fn block_gram(types: &[CartanType]) -> Vec<Vec<i64>> {
    let n: usize = types.iter().map(|t| t.rank()).sum();
    let mut g = vec![vec![0; n]; n];
    let mut off = 0;
    for t in types {
        let b = t.gram();
        for i in 0..b.len() {
            for j in 0..b.len() {
                g[off + i][off + j] = b[i][j];
            }
        }
        off += b.len();
    }
    g
}

impl RootSystem {
    /// Product of irreducible root systems of the given types.
    pub fn of_types(types: &[CartanType]) -> RootSystem {
        let gram = block_gram(types);
        let n = gram.len();
        let mut set: BTreeSet<Vector> = BTreeSet::new();
        let mut frontier: Vec<Vector> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        while let Some(v) = frontier.pop() {
            if !set.insert(v.clone()) {
                continue;
            }
            for i in 0..n {
                let w = reflect(&gram, i, &v);
                if !set.contains(&w) {
                    frontier.push(w);
                }
            }
        }
        RootSystem::with_gram(set.into_iter().collect(), gram).expect("library types are valid")
    }

    /// Root system from explicit roots in simple-root coordinates; the form is recovered from root strings.
    pub fn from_roots(roots: &[Vector]) -> Result<RootSystem, RootError> {
        let n = roots.first().map_or(0, |r| r.len());
        if roots.iter().any(|r| r.len() != n) {
            return Err(RootError::RankMismatch);
        }
        let set: BTreeSet<Vector> = roots.iter().cloned().collect();
        for r in &set {
            let neg: Vector = r.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(RootError::NotSymmetric);
            }
            if !(r.iter().all(|&x| x >= 0) || r.iter().all(|&x| x <= 0)) {
                return Err(RootError::MixedSigns(r.clone()));
            }
        }
        let unit = |i: usize| -> Vector { (0..n).map(|j| i64::from(i == j)).collect() };
        for i in 0..n {
            if !set.contains(&unit(i)) {
                return Err(RootError::MissingSimpleRoot(i));
            }
        }
        // cartan[i][j] = <α_j, α_i^∨> = -(largest k with α_j + k α_i a root)
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            cartan[i][i] = 2;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut k = 0;
                loop {
                    let mut v = unit(j);
                    v[i] += k + 1;
                    if !set.contains(&v) {
                        break;
                    }
                    k += 1;
                }
                cartan[i][j] = -k;
            }
        }
        // symmetrize: |α_i|^2 cartan[i][j] = |α_j|^2 cartan[j][i]
        let mut sq: Vec<Option<i64>> = vec![None; n];
        for start in 0..n {
            if sq[start].is_some() {
                continue;
            }
            sq[start] = Some(12);
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if i == j || cartan[i][j] == 0 {
                        continue;
                    }
                    if cartan[j][i] == 0 {
                        return Err(RootError::BadLengths);
                    }
                    let si = sq[i].unwrap();
                    let num = si * cartan[i][j];
                    if num % cartan[j][i] != 0 {
                        return Err(RootError::BadLengths);
                    }
                    let sj = num / cartan[j][i];
                    match sq[j] {
                        None => {
                            sq[j] = Some(sj);
                            stack.push(j);
                        }
                        Some(x) if x != sj => return Err(RootError::BadLengths),
                        _ => {}
                    }
                }
            }
        }
        let gram: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let si = sq[i].unwrap();
                        // (α_i, α_j) = cartan[i][j] |α_i|^2 / 2
                        cartan[i][j] * si / 2
                    })
                    .collect()
            })
            .collect();
        let rs = RootSystem::with_gram(set.into_iter().collect(), gram)?;
        for r in &rs.roots {
            for i in 0..n {
                if !rs.index.contains_key(&reflect(&rs.gram, i, r)) {
                    return Err(RootError::NotClosed);
                }
            }
        }
        Ok(rs)
    }

    fn with_gram(roots: Vec<Vector>, gram: Vec<Vec<i64>>) -> Result<RootSystem, RootError> {
        let rank = gram.len();
        let index: HashMap<Vector, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        // components: connected components of the simple-root graph
        let mut comp_of_simple = vec![usize::MAX; rank];
        let mut ncomp = 0;
        for s in 0..rank {
            if comp_of_simple[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp_of_simple[s] = ncomp;
            while let Some(i) = stack.pop() {
                for j in 0..rank {
                    if gram[i][j] != 0 && comp_of_simple[j] == usize::MAX {
                        comp_of_simple[j] = ncomp;
                        stack.push(j);
                    }
                }
            }
            ncomp += 1;
        }
        let component: Vec<usize> = roots
            .iter()
            .map(|r| {
                let i = r.iter().position(|&x| x != 0).expect("roots are nonzero");
                comp_of_simple[i]
            })
            .collect();
        let sq: Vec<i64> = roots.iter().map(|r| pair(&gram, r, r)).collect();
        let mut min_sq = vec![i64::MAX; ncomp];
        let mut max_sq = vec![0; ncomp];
        for (k, r) in roots.iter().enumerate() {
            if r.iter()
                .enumerate()
                .any(|(i, &x)| x != 0 && comp_of_simple[i] != component[k])
            {
                return Err(RootError::BadLengths);
            }
            min_sq[component[k]] = min_sq[component[k]].min(sq[k]);
            max_sq[component[k]] = max_sq[component[k]].max(sq[k]);
        }
        let mut lengths = Vec::with_capacity(roots.len());
        for (k, &s) in sq.iter().enumerate() {
            let m = min_sq[component[k]];
            if s <= 0 || s % m != 0 || s / m > 3 {
                return Err(RootError::BadLengths);
            }
            lengths.push((s / m) as u32);
        }
        let bond: Vec<u32> = (0..ncomp).map(|c| (max_sq[c] / min_sq[c]) as u32).collect();
        Ok(RootSystem {
            rank,
            roots,
            index,
            gram,
            lengths,
            component,
            bond,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neg(&self, i: usize) -> usize {
        let v: Vector = self.roots[i].iter().map(|x| -x).collect();
        self.index[&v]
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Invariant form on the root lattice.
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        pair(&self.gram, a, b)
    }

    /// `ℓ(α)`: squared length over the squared short length of its component.
    pub fn length(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    /// `ℓ(α^∨) = bond / ℓ(α)`.
    pub fn dual_length(&self, i: usize) -> u32 {
        self.bond[self.component[i]] / self.lengths[i]
    }

    pub fn component(&self, i: usize) -> usize {
        self.component[i]
    }

    pub fn bond(&self, component: usize) -> u32 {
        self.bond[component]
    }

    /// Image of the simple root basis under a permutation of roots, as columns.
    pub fn matrix_of_perm(&self, perm: &[usize]) -> Option<Vec<Vec<i64>>> {
        let n = self.rank;
        let cols: Vec<Vector> = (0..n)
            .map(|j| {
                let e: Vector = (0..n).map(|i| i64::from(i == j)).collect();
                self.roots[perm[self.index[&e]]].clone()
            })
            .collect();
        let mat: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect();
        let ok = self
            .roots
            .iter()
            .enumerate()
            .all(|(k, r)| apply(&mat, r) == self.roots[perm[k]]);
        ok.then_some(mat)
    }

    /// Root permutation induced by a lattice matrix (acting on column vectors).
    pub fn perm_of_matrix(&self, mat: &[Vec<i64>]) -> Option<Vec<usize>> {
        self.roots
            .iter()
            .map(|r| self.index_of(&apply(mat, r)))
            .collect()
    }

    /// All linear automorphisms of the root system, as root permutations.
    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>, RootError> {
        let n = self.rank;
        if n > 4 {
            return Err(RootError::RankTooLarge(n));
        }
        let simple: Vec<usize> = (0..n)
            .map(|j| self.index[&(0..n).map(|i| i64::from(i == j)).collect::<Vector>()])
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        self.search_auts(0, &simple, &mut choice, &mut out);
        out.sort();
        Ok(out)
    }

    fn search_auts(
        &self,
        depth: usize,
        simple: &[usize],
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.rank;
        if depth == n {
            let mat: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| self.roots[choice[j]][i]).collect())
                .collect();
            if let Some(p) = self.perm_of_matrix(&mat) {
                out.push(p);
            }
            return;
        }
        for c in 0..self.roots.len() {
            let ok = (0..=depth).all(|j| {
                let img_j = if j == depth { c } else { choice[j] };
                self.form(&self.roots[c], &self.roots[img_j])
                    == self.form(&self.roots[simple[depth]], &self.roots[simple[j]])
            });
            if ok {
                choice[depth] = c;
                self.search_auts(depth + 1, simple, choice, out);
            }
        }
    }
}

pub fn apply(mat: &[Vec<i64>], v: &[i64]) -> Vector {
    mat.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (t, n) in [
            (CartanType::A(1), 2),
            (CartanType::A(2), 6),
            (CartanType::A(3), 12),
            (CartanType::B(2), 8),
            (CartanType::C(3), 18),
            (CartanType::B(3), 18),
            (CartanType::G2, 12),
        ] {
            assert_eq!(RootSystem::of_types(&[t]).len(), n, "{t}");
        }
    }

    #[test]
    fn lengths_and_bonds() {
        let g2 = RootSystem::of_types(&[CartanType::G2]);
        let long = (0..g2.len()).filter(|&i| g2.length(i) == 3).count();
        assert_eq!(long, 6);
        assert!((0..g2.len()).all(|i| g2.length(i) * g2.dual_length(i) == 3));
        let c2 = RootSystem::of_types(&[CartanType::C(2)]);
        let i = c2.index_of(&[0, 1]).unwrap();
        assert_eq!(c2.length(i), 2);
        assert!(c2.index_of(&[2, 1]).is_some());
    }

    #[test]
    fn recovers_form_from_roots() {
        for t in [
            CartanType::B(3),
            CartanType::C(3),
            CartanType::G2,
            CartanType::A(3),
        ] {
            let rs = RootSystem::of_types(&[t]);
            let again = RootSystem::from_roots(rs.roots()).unwrap();
            for i in 0..rs.len() {
                assert_eq!(rs.length(i), again.length(i));
            }
        }
    }

    #[test]
    fn automorphism_group_orders() {
        for (t, n) in [
            (vec![CartanType::A(1)], 2),
            (vec![CartanType::A(2)], 12),
            (vec![CartanType::B(2)], 8),
            (vec![CartanType::G2], 12),
            (vec![CartanType::A(1), CartanType::A(1)], 8),
            (vec![CartanType::A(3)], 48),
            (vec![CartanType::B(3)], 48),
        ] {
            let rs = RootSystem::of_types(&t);
            assert_eq!(rs.automorphisms().unwrap().len(), n, "{t:?}");
        }
    }

    #[test]
    fn rejects_bad_root_sets() {
        assert_eq!(
            RootSystem::from_roots(&[vec![1]]),
            Err(RootError::NotSymmetric)
        );
        assert_eq!(
            RootSystem::from_roots(&[vec![2], vec![-2]]),
            Err(RootError::MissingSimpleRoot(0))
        );
    }
}
