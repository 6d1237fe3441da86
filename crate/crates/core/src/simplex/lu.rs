//! Sparse LU factorization of simplex bases with product-form updates.
//!
//! The basis is factorized by right-looking Gaussian elimination with a
//! Markowitz pivot search and threshold partial pivoting. Column replacements
//! between refactorizations are applied as eta matrices in basis-position space.

/// Relative pivot threshold for the Markowitz search.
const THRESHOLD: f64 = 0.01;
/// Entries below this magnitude are treated as structural zeros.
const DROP_TOL: f64 = 1e-14;
/// Columns whose largest active entry falls below this are considered singular.
const SINGULAR_TOL: f64 = 1e-11;
/// Number of candidate columns/rows inspected before settling on a pivot.
const SEARCH_LIMIT: usize = 4;

/// A basis could not be factorized: the listed positions have no pivot and
/// the listed rows are left uncovered.
#[derive(Debug, Clone)]
pub struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

/// LU factors of a basis plus the eta file accumulated since factorization.
#[derive(Debug, Clone, Default)]
pub struct BasisFactor {
    m: usize,
    /// Lower-triangular elimination steps: pivot row and `(row, multiplier)`.
    lower: Vec<(usize, Vec<(usize, f64)>)>,
    /// Pivot sequence `(row, position, value)`.
    pivots: Vec<(usize, usize, f64)>,
    /// Off-diagonal entries of each pivot row: `(position, value)` for later pivots.
    u_rows: Vec<Vec<(usize, f64)>>,
    /// Off-diagonal entries of each pivot column: `(row, value)` for earlier pivots.
    u_cols: Vec<Vec<(usize, f64)>>,
    etas: Vec<Eta>,
    eta_nnz: usize,
    factor_nnz: usize,
}

/// Doubly linked bucket lists keyed by nonzero count.
struct Buckets {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    key: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Buckets {
    fn new(n: usize, max_key: usize) -> Self {
        Buckets {
            head: vec![NIL; max_key + 2],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            key: vec![NIL; n],
        }
    }

    fn insert(&mut self, item: usize, key: usize) {
        let key = key.min(self.head.len() - 1);
        self.key[item] = key;
        self.prev[item] = NIL;
        self.next[item] = self.head[key];
        if self.head[key] != NIL {
            self.prev[self.head[key]] = item;
        }
        self.head[key] = item;
    }

    fn remove(&mut self, item: usize) {
        let key = self.key[item];
        if key == NIL {
            return;
        }
        if self.prev[item] != NIL {
            self.next[self.prev[item]] = self.next[item];
        } else {
            self.head[key] = self.next[item];
        }
        if self.next[item] != NIL {
            self.prev[self.next[item]] = self.prev[item];
        }
        self.key[item] = NIL;
    }

    fn update(&mut self, item: usize, key: usize) {
        self.remove(item);
        self.insert(item, key);
    }
}

impl BasisFactor {
    /// Factorizes the `m x m` matrix whose column `p` is `columns[p]` given as
    /// `(row, value)` pairs.
    pub fn factorize(m: usize, columns: &[Vec<(usize, f64)>]) -> Result<Self, Singular> {
        debug_assert_eq!(columns.len(), m);
        // Active submatrix: row-wise values, column-wise patterns.
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (p, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                if v.abs() > DROP_TOL {
                    rows[r].push((p, v));
                    cols[p].push(r);
                }
            }
        }
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; m];
        let mut col_buckets = Buckets::new(m, m);
        let mut row_buckets = Buckets::new(m, m);
        for p in 0..m {
            col_buckets.insert(p, cols[p].len());
        }
        for r in 0..m {
            row_buckets.insert(r, rows[r].len());
        }

        let mut lower = Vec::new();
        let mut pivots = Vec::with_capacity(m);
        let mut u_rows = Vec::with_capacity(m);
        let mut work = vec![0.0f64; m];
        let mut mark = vec![false; m];

        for _step in 0..m {
            let (r, c) = match select_pivot(&rows, &cols, &col_buckets, &row_buckets, &row_done) {
                Some(rc) => rc,
                None => {
                    let positions = (0..m).filter(|&p| !col_done[p]).collect();
                    let rows_left = (0..m).filter(|&r| !row_done[r]).collect();
                    return Err(Singular {
                        positions,
                        rows: rows_left,
                    });
                }
            };
            let pivot_val = rows[r]
                .iter()
                .find(|&&(p, _)| p == c)
                .map(|&(_, v)| v)
                .expect("pivot entry present");

            // Remove pivot row from the column patterns and buckets.
            row_done[r] = true;
            row_buckets.remove(r);
            col_done[c] = true;
            col_buckets.remove(c);
            let pivot_row: Vec<(usize, f64)> =
                rows[r].iter().copied().filter(|&(p, _)| p != c).collect();
            for &(p, _) in &rows[r] {
                if let Some(k) = cols[p].iter().position(|&x| x == r) {
                    cols[p].swap_remove(k);
                }
                if p != c && !col_done[p] {
                    col_buckets.update(p, cols[p].len());
                }
            }
            rows[r].clear();

            // Eliminate column c from the remaining rows.
            let targets: Vec<usize> = std::mem::take(&mut cols[c]);
            let mut multipliers = Vec::with_capacity(targets.len());
            for i in targets {
                if row_done[i] {
                    continue;
                }
                let row_i = std::mem::take(&mut rows[i]);
                let mut a_ic = 0.0;
                for &(p, v) in &row_i {
                    if p == c {
                        a_ic = v;
                    } else {
                        work[p] = v;
                        mark[p] = true;
                    }
                }
                let mult = a_ic / pivot_val;
                let mut new_row: Vec<(usize, f64)> = Vec::with_capacity(row_i.len() + pivot_row.len());
                for &(p, v) in &pivot_row {
                    if mark[p] {
                        work[p] -= mult * v;
                    } else {
                        // fill-in
                        work[p] = -mult * v;
                        mark[p] = true;
                        cols[p].push(i);
                    }
                }
                for &(p, _) in row_i.iter().chain(pivot_row.iter()) {
                    if p == c || !mark[p] {
                        continue;
                    }
                    mark[p] = false;
                    let v = work[p];
                    work[p] = 0.0;
                    if v.abs() > DROP_TOL {
                        new_row.push((p, v));
                    } else if let Some(k) = cols[p].iter().position(|&x| x == i) {
                        cols[p].swap_remove(k);
                    }
                }
                for &(p, _) in &new_row {
                    col_buckets.update(p, cols[p].len());
                }
                // columns that lost entries through cancellation
                for &(p, _) in row_i.iter().chain(pivot_row.iter()) {
                    if p != c && !col_done[p] {
                        col_buckets.update(p, cols[p].len());
                    }
                }
                rows[i] = new_row;
                row_buckets.update(i, rows[i].len());
                if mult != 0.0 {
                    multipliers.push((i, mult));
                }
            }
            if !multipliers.is_empty() {
                lower.push((r, multipliers));
            }
            pivots.push((r, c, pivot_val));
            u_rows.push(pivot_row);
        }

        // Column-wise copy of U indexed by pivot step.
        let mut step_of_pos = vec![0usize; m];
        for (k, &(_, c, _)) in pivots.iter().enumerate() {
            step_of_pos[c] = k;
        }
        let mut u_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        let mut factor_nnz = m;
        for (k, row) in u_rows.iter().enumerate() {
            let r = pivots[k].0;
            for &(p, v) in row {
                u_cols[step_of_pos[p]].push((r, v));
            }
            factor_nnz += row.len();
        }
        factor_nnz += lower.iter().map(|(_, l)| l.len()).sum::<usize>();

        Ok(BasisFactor {
            m,
            lower,
            pivots,
            u_rows,
            u_cols,
            etas: Vec::new(),
            eta_nnz: 0,
            factor_nnz,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn num_updates(&self) -> usize {
        self.etas.len()
    }

    /// Whether the eta file has grown enough that refactorizing pays off.
    pub fn wants_refactor(&self, max_updates: usize) -> bool {
        self.etas.len() >= max_updates || self.eta_nnz > 2 * self.factor_nnz + 10 * self.m
    }

    /// Solves `B w = x` in place: `x` enters in row space and leaves in position space.
    pub fn ftran(&self, x: &mut [f64], scratch: &mut [f64]) {
        debug_assert_eq!(x.len(), self.m);
        for (r, entries) in &self.lower {
            let v = x[*r];
            if v != 0.0 {
                for &(i, mult) in entries {
                    x[i] -= mult * v;
                }
            }
        }
        let w = scratch;
        for k in (0..self.pivots.len()).rev() {
            let (r, c, u) = self.pivots[k];
            let val = x[r] / u;
            w[c] = val;
            if val != 0.0 {
                for &(r2, uv) in &self.u_cols[k] {
                    x[r2] -= uv * val;
                }
            }
        }
        x.copy_from_slice(&w[..self.m]);
        for eta in &self.etas {
            let v = x[eta.pos];
            if v != 0.0 {
                let v = v / eta.pivot;
                x[eta.pos] = v;
                for &(i, w) in &eta.entries {
                    x[i] -= w * v;
                }
            }
        }
    }

    /// Solves `B^T z = e` in place: `e` enters in position space and leaves in row space.
    pub fn btran(&self, e: &mut [f64], scratch: &mut [f64]) {
        debug_assert_eq!(e.len(), self.m);
        for eta in self.etas.iter().rev() {
            let mut s = e[eta.pos];
            for &(i, w) in &eta.entries {
                s -= w * e[i];
            }
            e[eta.pos] = s / eta.pivot;
        }
        let z = scratch;
        for (k, &(r, _, u)) in self.pivots.iter().enumerate() {
            let c = self.pivots[k].1;
            let v = e[c] / u;
            z[r] = v;
            if v != 0.0 {
                for &(p, uv) in &self.u_rows[k] {
                    e[p] -= uv * v;
                }
            }
        }
        for (r, entries) in self.lower.iter().rev() {
            let mut s = 0.0;
            for &(i, mult) in entries {
                s += mult * z[i];
            }
            z[*r] -= s;
        }
        e.copy_from_slice(&z[..self.m]);
    }

    /// Records that position `pos` now holds a column whose FTRAN image is `column`.
    pub fn update(&mut self, pos: usize, column: &[f64]) {
        let pivot = column[pos];
        let entries: Vec<(usize, f64)> = column
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != pos && v.abs() > DROP_TOL)
            .map(|(i, &v)| (i, v))
            .collect();
        self.eta_nnz += entries.len() + 1;
        self.etas.push(Eta {
            pos,
            pivot,
            entries,
        });
    }
}

fn entry(rows: &[Vec<(usize, f64)>], r: usize, c: usize) -> f64 {
    rows[r]
        .iter()
        .find(|&&(p, _)| p == c)
        .map_or(0.0, |&(_, v)| v)
}

fn col_max(rows: &[Vec<(usize, f64)>], cols: &[Vec<usize>], c: usize) -> f64 {
    cols[c]
        .iter()
        .map(|&r| entry(rows, r, c).abs())
        .fold(0.0, f64::max)
}

/// Markowitz search over the sparsest columns and rows.
fn select_pivot(
    rows: &[Vec<(usize, f64)>],
    cols: &[Vec<usize>],
    col_buckets: &Buckets,
    row_buckets: &Buckets,
    row_done: &[bool],
) -> Option<(usize, usize)> {
    let max_key = col_buckets.head.len() - 1;
    let mut best: Option<(usize, usize)> = None;
    let mut best_cost = usize::MAX;
    let mut best_mag = 0.0;
    let mut inspected = 0;

    // Column singletons first: no elimination needed.
    let mut c = col_buckets.head[1];
    while c != NIL {
        let r = cols[c][0];
        let v = entry(rows, r, c).abs();
        if v > SINGULAR_TOL {
            return Some((r, c));
        }
        c = col_buckets.next[c];
    }
    // Row singletons.
    let mut r = row_buckets.head[1];
    while r != NIL {
        if !row_done[r] {
            let (c, v) = rows[r][0];
            if v.abs() > SINGULAR_TOL && v.abs() >= THRESHOLD * col_max(rows, cols, c) {
                return Some((r, c));
            }
        }
        r = row_buckets.next[r];
    }

    for count in 2..=max_key {
        // columns with `count` entries
        let mut c = col_buckets.head[count];
        while c != NIL {
            let cmax = col_max(rows, cols, c);
            if cmax > SINGULAR_TOL {
                for &r in &cols[c] {
                    let v = entry(rows, r, c).abs();
                    if v >= THRESHOLD * cmax && v > SINGULAR_TOL {
                        let cost = (rows[r].len() - 1) * (count - 1);
                        if cost < best_cost || (cost == best_cost && v > best_mag) {
                            best_cost = cost;
                            best_mag = v;
                            best = Some((r, c));
                        }
                    }
                }
                inspected += 1;
            }
            if best.is_some() && (inspected >= SEARCH_LIMIT || best_cost <= (count - 1) * (count - 1))
            {
                return best;
            }
            c = col_buckets.next[c];
        }
        // rows with `count` entries
        let mut r = row_buckets.head[count];
        while r != NIL {
            if !row_done[r] {
                for &(c, v) in &rows[r] {
                    let cmax = col_max(rows, cols, c);
                    let v = v.abs();
                    if v >= THRESHOLD * cmax && v > SINGULAR_TOL {
                        let cost = (count - 1) * (cols[c].len() - 1);
                        if cost < best_cost || (cost == best_cost && v > best_mag) {
                            best_cost = cost;
                            best_mag = v;
                            best = Some((r, c));
                        }
                    }
                }
                inspected += 1;
            }
            if best.is_some() && (inspected >= SEARCH_LIMIT || best_cost <= count * (count - 1)) {
                return best;
            }
            r = row_buckets.next[r];
        }
        if best.is_some() && best_cost <= count * count {
            return best;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(a: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
        let m = a.len();
        (0..m)
            .map(|c| {
                (0..m)
                    .filter(|&r| a[r][c] != 0.0)
                    .map(|r| (r, a[r][c]))
                    .collect()
            })
            .collect()
    }

    fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
            .collect()
    }

    fn pseudo_random_matrix(m: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64) / (1u64 << 31) as f64
        };
        let mut a = vec![vec![0.0; m]; m];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 1.0 + next();
            for v in row.iter_mut() {
                if next() < 0.25 {
                    *v += next() * 2.0 - 1.0;
                }
            }
        }
        a
    }

    #[test]
    fn ftran_and_btran_invert_random_sparse_matrices() {
        for seed in 0..20 {
            let m = 3 + (seed as usize % 17);
            let a = pseudo_random_matrix(m, seed);
            let f = BasisFactor::factorize(m, &dense_to_cols(&a)).unwrap();
            let mut scratch = vec![0.0; m];
            let x_true: Vec<f64> = (0..m).map(|i| i as f64 - 1.5).collect();
            let mut b = matvec(&a, &x_true);
            f.ftran(&mut b, &mut scratch);
            for i in 0..m {
                assert!((b[i] - x_true[i]).abs() < 1e-9, "ftran seed {seed}");
            }
            // B^T z = e
            let at: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a[j][i]).collect()).collect();
            let mut e = matvec(&at, &x_true);
            f.btran(&mut e, &mut scratch);
            for i in 0..m {
                assert!((e[i] - x_true[i]).abs() < 1e-9, "btran seed {seed}");
            }
        }
    }

    #[test]
    fn eta_updates_track_column_replacement() {
        let m = 6;
        let mut a = pseudo_random_matrix(m, 7);
        let mut f = BasisFactor::factorize(m, &dense_to_cols(&a)).unwrap();
        let mut scratch = vec![0.0; m];
        for (step, pos) in [2usize, 4, 0, 2].into_iter().enumerate() {
            let newcol: Vec<f64> = (0..m).map(|i| ((i + step) % 3) as f64 + if i == pos { 2.0 } else { 0.0 }).collect();
            let mut w = newcol.clone();
            f.ftran(&mut w, &mut scratch);
            f.update(pos, &w);
            for (i, row) in a.iter_mut().enumerate() {
                row[pos] = newcol[i];
            }
            let x_true: Vec<f64> = (0..m).map(|i| (i * i) as f64 * 0.5 - 2.0).collect();
            let mut b = matvec(&a, &x_true);
            f.ftran(&mut b, &mut scratch);
            for i in 0..m {
                assert!((b[i] - x_true[i]).abs() < 1e-8);
            }
            let at: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a[j][i]).collect()).collect();
            let mut e = matvec(&at, &x_true);
            f.btran(&mut e, &mut scratch);
            for i in 0..m {
                assert!((e[i] - x_true[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn singular_matrix_reports_uncovered_positions() {
        let a = vec![
            vec![1.0, 2.0, 0.0],
            vec![2.0, 4.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let err = BasisFactor::factorize(3, &dense_to_cols(&a)).unwrap_err();
        assert_eq!(err.positions.len(), 1);
        assert_eq!(err.rows.len(), 1);
    }
}
