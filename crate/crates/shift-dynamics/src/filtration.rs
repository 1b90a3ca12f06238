use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use graph_core::EdgeId;

use crate::linalg::{null_space, project, to_sparse, weighted_dot, SparseMatrix, Q};
use crate::{ShiftError, ShiftSpace};

/// Largest number of words allowed at the truncation level.
pub const DEFAULT_WORD_CAP: usize = 200_000;

#[derive(Debug, Clone)]
struct Level {
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    weight: Vec<Q>,
    // level n-1 positions of u[..n] and u[1..]; empty at level 0
    prefix: Vec<usize>,
    suffix: Vec<usize>,
}

/// Cylinder functions `P_0 ⊂ … ⊂ P_N` on the one-sided subshift, with the L² form of the
/// conformal measure `μ[w_0…w_n] = |Σ|⁻¹ Π_{i<n} κ(w_i)`.
///
/// `P_n` is spanned by indicators of words of length `n+1`. Vectors at level `n` are
/// coordinate lists over those words, so the Gram matrix of each level is diagonal.
#[derive(Debug, Clone)]
pub struct FiltrationSpace {
    pub shift: ShiftSpace,
    pub truncation: usize,
    levels: Vec<Level>,
}

/// One row of the rank table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationRow {
    pub n: usize,
    pub theta: usize,
    pub theta_prev: usize,
    pub rank_f: usize,
    /// `θ_n − θ_{n−1} + 1`.
    pub formula: i64,
    /// Dimension of the kernel of δ on `P_{n−1}`.
    pub kernel_dim: usize,
    pub gr_dim: usize,
    /// Rank of `j: F_{n−1} → F_n`.
    pub j_rank: usize,
    pub j_injective: bool,
}

pub fn filtration_data(s: &ShiftSpace, truncation: usize) -> Result<FiltrationSpace, ShiftError> {
    filtration_data_capped(s, truncation, DEFAULT_WORD_CAP)
}

pub fn filtration_data_capped(s: &ShiftSpace, truncation: usize, cap: usize) -> Result<FiltrationSpace, ShiftError> {
    if truncation < 1 {
        return Err(ShiftError::Truncation { min: 1, got: truncation });
    }
    let k = s.alphabet_size();
    let w0 = BigRational::new(1.into(), (k as i64).into());
    let words: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut levels = vec![Level { words, index, weight: vec![w0; k], prefix: Vec::new(), suffix: Vec::new() }];
    for n in 1..=truncation {
        let prev = &levels[n - 1];
        let mut words = Vec::new();
        let mut weight = Vec::new();
        let mut prefix = Vec::new();
        for (i, u) in prev.words.iter().enumerate() {
            let last = u[u.len() - 1];
            let step = &prev.weight[i] * s.kappa(last);
            for &a in s.successors(last) {
                let mut v = u.clone();
                v.push(a);
                words.push(v);
                weight.push(step.clone());
                prefix.push(i);
            }
            if words.len() > cap {
                return Err(ShiftError::SizeCap { words: words.len(), cap });
            }
        }
        let suffix = words.iter().map(|v| prev.index[&v[1..]]).collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        levels.push(Level { words, index, weight, prefix, suffix });
    }
    Ok(FiltrationSpace { shift: s.clone(), truncation, levels })
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl FiltrationSpace {
    fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    fn check(&self, n: usize) -> Result<(), ShiftError> {
        if n > self.truncation {
            return Err(ShiftError::Level { level: n, truncation: self.truncation });
        }
        Ok(())
    }

    /// `dim P_n = θ_n`.
    pub fn dim(&self, n: usize) -> usize {
        self.level(n).words.len()
    }

    /// Words of length `n+1` as letter indices, lexicographic.
    pub fn words(&self, n: usize) -> &[Vec<usize>] {
        &self.level(n).words
    }

    pub fn weights(&self, n: usize) -> &[Q] {
        &self.level(n).weight
    }

    pub fn position(&self, n: usize, word: &[usize]) -> Option<usize> {
        self.levels.get(n)?.index.get(word).copied()
    }

    /// Position at level `n−1` of `u[..n]` for each word `u` at level `n ≥ 1`.
    pub fn prefix_map(&self, n: usize) -> &[usize] {
        &self.level(n).prefix
    }

    /// Position at level `n−1` of `u[1..]` for each word `u` at level `n ≥ 1`.
    pub fn suffix_map(&self, n: usize) -> &[usize] {
        &self.level(n).suffix
    }

    pub fn gram(&self, n: usize) -> SparseMatrix {
        SparseMatrix::diagonal(self.weights(n))
    }

    pub fn inner(&self, n: usize, x: &[Q], y: &[Q]) -> Q {
        weighted_dot(x, y, self.weights(n))
    }

    /// Indicator at level `n` of the cylinder of a word of at most `n+1` letters.
    pub fn cylinder(&self, n: usize, word: &[usize]) -> Result<Vec<Q>, ShiftError> {
        self.check(n)?;
        if word.is_empty() || word.len() > n + 1 {
            return Err(ShiftError::Level { level: word.len().saturating_sub(1), truncation: n });
        }
        let v: Vec<Q> = self.words(n).iter().map(|u| if u.starts_with(word) { Q::one() } else { Q::zero() }).collect();
        if v.iter().all(Zero::is_zero) {
            return Err(ShiftError::NotAdmissible(self.shift.decode(word)));
        }
        Ok(v)
    }

    pub fn cylinder_of_edges(&self, n: usize, word: &[EdgeId]) -> Result<Vec<Q>, ShiftError> {
        let w = self.shift.encode(word)?;
        self.cylinder(n, &w)
    }

    /// Inclusion `P_n ⊂ P_{n+1}`.
    pub fn lift(&self, n: usize, x: &[Q]) -> Vec<Q> {
        self.prefix_map(n + 1).iter().map(|&i| x[i].clone()).collect()
    }

    pub fn lift_to(&self, n: usize, m: usize, x: &[Q]) -> Vec<Q> {
        let mut v = x.to_vec();
        for k in n..m {
            v = self.lift(k, &v);
        }
        v
    }

    /// Orthogonal projection of `y ∈ P_m` onto `P_n ⊂ P_m` (`n ≤ m`), written at level `n`.
    pub fn expectation(&self, m: usize, n: usize, y: &[Q]) -> Vec<Q> {
        let mut v = y.to_vec();
        for k in (n + 1..=m).rev() {
            let mut acc = vec![Q::zero(); self.dim(k - 1)];
            for (i, &p) in self.prefix_map(k).iter().enumerate() {
                if !v[i].is_zero() {
                    acc[p] += &v[i] * &self.weights(k)[i];
                }
            }
            v = acc.into_iter().zip(self.weights(k - 1)).map(|(a, w)| a / w).collect();
        }
        v
    }

    /// `f ↦ f∘T`, from `P_n` to `P_{n+1}`.
    pub fn pullback(&self, n: usize, x: &[Q]) -> Vec<Q> {
        self.suffix_map(n + 1).iter().map(|&i| x[i].clone()).collect()
    }

    /// `δf = f − f∘T`, from `P_n` to `P_{n+1}`.
    pub fn delta(&self, n: usize, x: &[Q]) -> Vec<Q> {
        self.lift(n, x).into_iter().zip(self.pullback(n, x)).map(|(a, b)| a - b).collect()
    }

    pub fn lift_matrix(&self, n: usize) -> SparseMatrix {
        self.index_matrix(n, self.prefix_map(n + 1))
    }

    pub fn pullback_matrix(&self, n: usize) -> SparseMatrix {
        self.index_matrix(n, self.suffix_map(n + 1))
    }

    fn index_matrix(&self, n: usize, map: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(map.len(), self.dim(n));
        for (i, &j) in map.iter().enumerate() {
            m.set(i, j, Q::one());
        }
        m
    }

    pub fn delta_matrix(&self, n: usize) -> SparseMatrix {
        self.lift_matrix(n).sub(&self.pullback_matrix(n))
    }

    // classes of level-n words forced equal by δf = 0
    fn kernel_classes(&self, n: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.dim(n)).collect();
        for (&a, &b) in self.prefix_map(n + 1).iter().zip(self.suffix_map(n + 1)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..self.dim(n)).map(|i| find(&mut parent, i)).collect()
    }

    /// Dimension of `ker δ` on `P_n` (`n < N`): `δf = 0` forces `f(u[..n+1]) = f(u[1..])`
    /// along every word `u` of length `n+2`.
    pub fn kernel_dim(&self, n: usize) -> usize {
        let c = self.kernel_classes(n);
        (0..c.len()).filter(|&i| c[i] == i).count()
    }

    /// Basis of `ker δ` on `P_n`, one indicator per class.
    pub fn delta_kernel(&self, n: usize) -> Vec<Vec<Q>> {
        let c = self.kernel_classes(n);
        let roots: Vec<usize> = (0..c.len()).filter(|&i| c[i] == i).collect();
        roots.iter().map(|&r| c.iter().map(|&x| if x == r { Q::one() } else { Q::zero() }).collect()).collect()
    }

    pub fn rank_delta(&self, n: usize) -> usize {
        self.dim(n) - self.kernel_dim(n)
    }

    /// Rank of δ on `P_n` by elimination, independent of the class count.
    pub fn rank_delta_exact(&self, n: usize) -> usize {
        self.delta_matrix(n).rank()
    }

    /// `rank F_n = θ_n − rank(δ|P_{n−1})`, with `F_0 = P_0`.
    pub fn f_rank(&self, n: usize) -> usize {
        if n == 0 {
            self.dim(0)
        } else {
            self.dim(n) - self.rank_delta(n - 1)
        }
    }

    /// `F_n` as the orthocomplement of `δP_{n−1}` in `P_n`.
    pub fn f_basis(&self, n: usize) -> Vec<Vec<Q>> {
        if n == 0 {
            return SparseMatrix::identity(self.dim(0)).to_dense();
        }
        let w = self.weights(n);
        let d = self.delta_matrix(n - 1).transpose();
        let mut m = SparseMatrix::zeros(d.rows(), d.cols());
        for r in 0..d.rows() {
            for (&c, x) in d.row(r) {
                m.set(r, c, x * &w[c]);
            }
        }
        null_space(&m)
    }

    // functionals ⟨·, χ_v⟩ and ⟨·, χ_v∘T⟩ for v at level n−1
    fn gr_constraints(&self, n: usize) -> SparseMatrix {
        let w = self.weights(n);
        let k = self.dim(n - 1);
        let mut m = SparseMatrix::zeros(2 * k, self.dim(n));
        for i in 0..self.dim(n) {
            m.add_to(self.prefix_map(n)[i], i, &w[i]);
            m.add_to(k + self.suffix_map(n)[i], i, &w[i]);
        }
        m
    }

    /// `Gr_n = P_n ∩ (P_{n−1} + P_{n−1}∘T)^⊥` by a null-space computation; `Gr_0 = P_0`.
    pub fn gr_basis_generic(&self, n: usize) -> Vec<Vec<Q>> {
        if n == 0 {
            return SparseMatrix::identity(self.dim(0)).to_dense();
        }
        null_space(&self.gr_constraints(n))
    }

    // for n ≥ 2 the words u = b·m·a group by their middle m; weights depend on (b, m)
    fn blocks(&self, n: usize) -> Vec<Block> {
        let mut by_mid: BTreeMap<usize, Block> = BTreeMap::new();
        let pre = self.prefix_map(n);
        let mid_of = self.suffix_map(n - 1);
        for (i, u) in self.words(n).iter().enumerate() {
            let blk = by_mid.entry(mid_of[pre[i]]).or_default();
            blk.cells.push((u[0], u[n], i));
        }
        by_mid.into_values().map(Block::finish).collect()
    }

    pub fn gr_dim(&self, n: usize) -> usize {
        match n {
            0 => self.dim(0),
            1 => self.dim(1) - self.gr_constraints(1).rank(),
            _ => self.blocks(n).iter().map(|b| (b.rows.len() - 1) * (b.cols.len() - 1)).sum(),
        }
    }

    /// Basis of `Gr_n`; for `n ≥ 2` built block by block from doubly centred matrices.
    pub fn gr_basis(&self, n: usize) -> Vec<Vec<Q>> {
        if n < 2 {
            return self.gr_basis_generic(n);
        }
        let w = self.weights(n);
        let mut out = Vec::new();
        for b in self.blocks(n) {
            let (b0, a0) = (b.rows[0], b.cols[0]);
            for &rb in &b.rows[1..] {
                let ratio = &w[b.cell[&(rb, a0)]] / &w[b.cell[&(b0, a0)]];
                for &ca in &b.cols[1..] {
                    let mut v = vec![Q::zero(); self.dim(n)];
                    v[b.cell[&(rb, ca)]] = Q::one();
                    v[b.cell[&(rb, a0)]] = -Q::one();
                    v[b.cell[&(b0, ca)]] = -ratio.clone();
                    v[b.cell[&(b0, a0)]] = ratio.clone();
                    out.push(v);
                }
            }
        }
        out
    }

    /// Orthogonal projection of `x ∈ P_n` onto `Gr_n`.
    pub fn project_gr(&self, n: usize, x: &[Q]) -> Vec<Q> {
        if n < 2 {
            let basis = self.gr_basis_generic(n);
            return project(x, &basis, self.weights(n)).expect("independent basis");
        }
        let w = self.weights(n);
        let mut out = x.to_vec();
        for b in self.blocks(n) {
            let s = Q::from_integer((b.cols.len() as i64).into());
            let wb: Vec<Q> = b.rows.iter().map(|&r| w[b.cell[&(r, b.cols[0])]].clone()).collect();
            let total: Q = wb.iter().sum();
            let r: Vec<Q> = b.rows.iter().map(|&rb| b.cols.iter().map(|&ca| x[b.cell[&(rb, ca)]].clone()).sum::<Q>() / &s).collect();
            let k: Q = wb.iter().zip(&r).map(|(a, c)| a * c).sum();
            for &ca in &b.cols {
                let c: Q = b.rows.iter().zip(&wb).map(|(&rb, wr)| wr * &x[b.cell[&(rb, ca)]]).sum();
                let beta = (c - &k) / &total;
                for (ri, &rb) in b.rows.iter().enumerate() {
                    let i = b.cell[&(rb, ca)];
                    out[i] = &x[i] - &r[ri] - &beta;
                }
            }
        }
        out
    }

    /// Whether `x ∈ P_n` is orthogonal to `P_{n−1}` and to `P_{n−1}∘T`.
    pub fn in_gr(&self, n: usize, x: &[Q]) -> bool {
        if n == 0 {
            return true;
        }
        self.gr_constraints(n).apply(x).iter().all(Zero::is_zero)
    }

    /// Rank of `j: F_{n−1} → F_n`, as `rank F_n − dim Gr_n`.
    pub fn j_rank(&self, n: usize) -> usize {
        self.f_rank(n) - self.gr_dim(n)
    }

    /// Rank table for `1 ≤ n ≤ N`.
    pub fn report(&self) -> Vec<FiltrationRow> {
        (1..=self.truncation)
            .map(|n| {
                let (theta, theta_prev) = (self.dim(n), self.dim(n - 1));
                let j_rank = self.j_rank(n);
                FiltrationRow {
                    n,
                    theta,
                    theta_prev,
                    rank_f: self.f_rank(n),
                    formula: theta as i64 - theta_prev as i64 + 1,
                    kernel_dim: self.kernel_dim(n - 1),
                    gr_dim: self.gr_dim(n),
                    j_rank,
                    j_injective: j_rank == self.f_rank(n - 1),
                }
            })
            .collect()
    }

    /// Positions of the nonzero coordinates of a vector, as edge words.
    pub fn support(&self, n: usize, x: &[Q]) -> Vec<Vec<EdgeId>> {
        to_sparse(x).keys().map(|&i| self.shift.decode(&self.words(n)[i])).collect()
    }
}

#[derive(Debug, Default)]
struct Block {
    cells: Vec<(usize, usize, usize)>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    cell: HashMap<(usize, usize), usize>,
}

impl Block {
    fn finish(mut self) -> Self {
        for &(b, a, i) in &self.cells {
            self.cell.insert((b, a), i);
            if !self.rows.contains(&b) {
                self.rows.push(b);
            }
            if !self.cols.contains(&a) {
                self.cols.push(a);
            }
        }
        debug_assert_eq!(self.cell.len(), self.rows.len() * self.cols.len());
        self
    }
}
