//! Bounded dual simplex over `A x - z = 0` with every variable boxed.
//!
//! Row activities `z` get finite implied bounds from the structural boxes,
//! so any basis can be made dual feasible by moving nonbasic variables to the
//! bound that matches the sign of their reduced cost. That makes the dual
//! simplex the only phase ever needed: cold starts, added rows, and bound
//! changes in branch-and-bound all reduce to restoring primal feasibility.

use super::lu::BasisFactor;
use super::{Row, Sense};
use crate::error::{Error, Result};

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;
/// Degenerate iterations in a row before switching to Bland's rule.
const STALL_LIMIT: usize = 300;
const NONBASIC: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Optimal,
    Infeasible,
}

/// Per-variable basis status, structurals first, then one logical per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

#[derive(Debug, Clone)]
pub struct DualSimplex {
    n: usize,
    cost: Vec<f64>,
    /// Bounds of all `n + m` variables.
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Bounds the structurals were declared with; implied row bounds derive from these.
    declared_lo: Vec<f64>,
    declared_hi: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    cols: Vec<Vec<(usize, f64)>>,
    basic: Vec<usize>,
    pos_of: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    d: Vec<f64>,
    dse: Vec<f64>,
    factor: BasisFactor,
    fresh: bool,
    /// Nonbasic values moved since basic values were last computed.
    dirty_primal: bool,
    /// A row whose implied activity range misses its right-hand side.
    trivially_infeasible: bool,
    pub iterations: u64,
    pub max_iterations: u64,
    // scratch
    work_row: Vec<f64>,
    work_pos: Vec<f64>,
    scratch: Vec<f64>,
    alpha: Vec<f64>,
    touched: Vec<usize>,
    touched_mark: Vec<bool>,
}

impl DualSimplex {
    /// Structural variables with costs and bounds, no rows yet.
    pub fn new(cost: Vec<f64>, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let n = cost.len();
        if lo.len() != n || hi.len() != n {
            return Err(Error::Input("bound vectors do not match objective length".into()));
        }
        for j in 0..n {
            if !(lo[j].is_finite() && hi[j].is_finite()) || lo[j] > hi[j] {
                return Err(Error::Input(format!(
                    "variable {j} has invalid bounds [{}, {}]",
                    lo[j], hi[j]
                )));
            }
        }
        let mut s = DualSimplex {
            n,
            declared_lo: lo.clone(),
            declared_hi: hi.clone(),
            lo,
            hi,
            rows: Vec::new(),
            cols: vec![Vec::new(); n],
            basic: Vec::new(),
            pos_of: vec![NONBASIC; n],
            at_upper: vec![false; n],
            x: vec![0.0; n],
            d: cost.clone(),
            cost,
            dse: Vec::new(),
            factor: BasisFactor::default(),
            fresh: false,
            dirty_primal: false,
            trivially_infeasible: false,
            iterations: 0,
            max_iterations: 50_000_000,
            work_row: Vec::new(),
            work_pos: Vec::new(),
            scratch: Vec::new(),
            alpha: vec![0.0; n],
            touched: Vec::new(),
            touched_mark: vec![false; n],
        };
        for j in 0..n {
            s.at_upper[j] = s.cost[j] < 0.0;
            s.x[j] = if s.at_upper[j] { s.hi[j] } else { s.lo[j] };
        }
        Ok(s)
    }

    pub fn num_structurals(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends rows; each new row's activity variable enters the basis.
    pub fn add_rows(&mut self, new_rows: &[Row]) -> Result<()> {
        for row in new_rows {
            let i = self.rows.len();
            let mut terms: Vec<(usize, f64)> = Vec::with_capacity(row.terms.len());
            for &(j, a) in &row.terms {
                if j >= self.n {
                    return Err(Error::Input(format!("row references variable {j} >= {}", self.n)));
                }
                if a != 0.0 {
                    terms.push((j, a));
                }
            }
            terms.sort_by_key(|t| t.0);
            // merge duplicate indices
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
            for (j, a) in terms {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += a,
                    _ => merged.push((j, a)),
                }
            }
            merged.retain(|t| t.1 != 0.0);

            let (mut amin, mut amax) = (0.0, 0.0);
            let mut activity = 0.0;
            for &(j, a) in &merged {
                let (l, h) = (self.declared_lo[j], self.declared_hi[j]);
                amin += (a * l).min(a * h);
                amax += (a * l).max(a * h);
                activity += a * self.x[j];
                self.cols[j].push((i, a));
            }
            let (mut l, mut h) = match row.sense {
                Sense::Le => (amin, row.rhs),
                Sense::Ge => (row.rhs, amax),
                Sense::Eq => (row.rhs, row.rhs),
            };
            if l > h {
                if l - h <= 1e-9 * (1.0 + l.abs()) {
                    let mid = if row.sense == Sense::Le { h } else { l };
                    l = mid;
                    h = mid;
                } else {
                    self.trivially_infeasible = true;
                    h = l;
                }
            }
            self.rows.push(merged);
            self.lo.push(l);
            self.hi.push(h);
            self.cost.push(0.0);
            self.x.push(activity);
            self.d.push(0.0);
            self.at_upper.push(false);
            self.pos_of.push(self.basic.len());
            self.basic.push(self.n + i);
            self.dse.push(1.0);
            self.alpha.push(0.0);
            self.touched_mark.push(false);
        }
        self.fresh = false;
        Ok(())
    }

    /// Changes the bounds of a structural variable.
    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        debug_assert!(j < self.n && lo <= hi);
        self.lo[j] = lo;
        self.hi[j] = hi;
        if self.pos_of[j] == NONBASIC {
            let v = if self.at_upper[j] { hi } else { lo };
            if v != self.x[j] {
                self.x[j] = v;
                self.dirty_primal = true;
            }
        }
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lo[j], self.hi[j])
    }

    /// Values of the structural variables clamped to their bounds.
    pub fn values(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.x[j].clamp(self.lo[j], self.hi[j]))
            .collect()
    }

    pub fn objective(&self) -> f64 {
        let v = self.values();
        v.iter().zip(&self.cost[..self.n]).map(|(x, c)| x * c).sum()
    }

    pub fn basis(&self) -> Vec<VarStatus> {
        (0..self.n + self.rows.len())
            .map(|j| {
                if self.pos_of[j] != NONBASIC {
                    VarStatus::Basic
                } else if self.at_upper[j] {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                }
            })
            .collect()
    }

    /// Installs a basis recorded earlier. Returns false (leaving the current
    /// basis untouched) when the token does not fit.
    pub fn load_basis(&mut self, status: &[VarStatus]) -> bool {
        let total = self.n + self.rows.len();
        if status.len() != total
            || status.iter().filter(|&&s| s == VarStatus::Basic).count() != self.rows.len()
        {
            return false;
        }
        self.basic.clear();
        for (j, &s) in status.iter().enumerate() {
            match s {
                VarStatus::Basic => {
                    self.pos_of[j] = self.basic.len();
                    self.basic.push(j);
                }
                VarStatus::AtLower | VarStatus::AtUpper => {
                    self.pos_of[j] = NONBASIC;
                    self.at_upper[j] = s == VarStatus::AtUpper;
                    self.x[j] = if self.at_upper[j] { self.hi[j] } else { self.lo[j] };
                }
            }
        }
        self.dse = vec![1.0; self.rows.len()];
        self.fresh = false;
        true
    }

    fn column_of(&self, j: usize, out: &mut [f64]) {
        if j < self.n {
            for &(i, a) in &self.cols[j] {
                out[i] += a;
            }
        } else {
            out[j - self.n] -= 1.0;
        }
    }

    fn ensure_scratch(&mut self) {
        let m = self.rows.len();
        self.work_row.resize(m, 0.0);
        self.work_pos.resize(m, 0.0);
        self.scratch.resize(m, 0.0);
    }

    /// Factorizes the current basis, swapping in logicals for dependent columns.
    fn refactor(&mut self) -> Result<()> {
        let m = self.rows.len();
        self.ensure_scratch();
        for _attempt in 0..4 {
            let cols: Vec<Vec<(usize, f64)>> = self
                .basic
                .iter()
                .map(|&j| {
                    if j < self.n {
                        self.cols[j].clone()
                    } else {
                        vec![(j - self.n, -1.0)]
                    }
                })
                .collect();
            match BasisFactor::factorize(m, &cols) {
                Ok(f) => {
                    self.factor = f;
                    return Ok(());
                }
                Err(sing) => {
                    for (&p, &r) in sing.positions.iter().zip(&sing.rows) {
                        let out = self.basic[p];
                        self.pos_of[out] = NONBASIC;
                        self.at_upper[out] = false;
                        self.x[out] = self.lo[out];
                        let inn = self.n + r;
                        debug_assert_eq!(self.pos_of[inn], NONBASIC);
                        self.basic[p] = inn;
                        self.pos_of[inn] = p;
                        self.dse[p] = 1.0;
                    }
                }
            }
        }
        Err(Error::Internal("basis repair failed".into()))
    }

    /// Recomputes basic values from the nonbasic ones.
    fn recompute_primal(&mut self) {
        let m = self.rows.len();
        let mut r = std::mem::take(&mut self.work_row);
        r.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..self.n {
            if self.pos_of[j] == NONBASIC && self.x[j] != 0.0 {
                for &(i, a) in &self.cols[j] {
                    r[i] -= a * self.x[j];
                }
            }
        }
        for i in 0..m {
            let j = self.n + i;
            if self.pos_of[j] == NONBASIC {
                r[i] += self.x[j];
            }
        }
        self.factor.ftran(&mut r, &mut self.scratch);
        for p in 0..m {
            self.x[self.basic[p]] = r[p];
        }
        self.work_row = r;
    }

    fn recompute_duals(&mut self) {
        let m = self.rows.len();
        let mut e = std::mem::take(&mut self.work_pos);
        for p in 0..m {
            e[p] = self.cost[self.basic[p]];
        }
        self.factor.btran(&mut e, &mut self.scratch);
        for j in 0..self.n {
            if self.pos_of[j] != NONBASIC {
                self.d[j] = 0.0;
                continue;
            }
            let mut dj = self.cost[j];
            for &(i, a) in &self.cols[j] {
                dj -= e[i] * a;
            }
            self.d[j] = dj;
        }
        for i in 0..m {
            let j = self.n + i;
            self.d[j] = if self.pos_of[j] == NONBASIC { e[i] } else { 0.0 };
        }
        self.work_pos = e;
    }

    /// Moves nonbasic variables to the bound their reduced cost prefers.
    fn make_dual_feasible(&mut self) -> bool {
        let mut changed = false;
        for j in 0..self.n + self.rows.len() {
            if self.pos_of[j] != NONBASIC {
                continue;
            }
            let want_upper = if self.d[j] < -DUAL_TOL {
                true
            } else if self.d[j] > DUAL_TOL {
                false
            } else {
                self.at_upper[j]
            };
            let v = if want_upper { self.hi[j] } else { self.lo[j] };
            if want_upper != self.at_upper[j] || v != self.x[j] {
                self.at_upper[j] = want_upper;
                self.x[j] = v;
                changed = true;
            }
        }
        changed
    }

    fn restart(&mut self) -> Result<()> {
        self.refactor()?;
        self.recompute_duals();
        self.make_dual_feasible();
        self.recompute_primal();
        self.fresh = true;
        self.dirty_primal = false;
        Ok(())
    }

    /// Runs the dual simplex to optimality or proven infeasibility.
    pub fn solve(&mut self) -> Result<Outcome> {
        if self.trivially_infeasible {
            return Ok(Outcome::Infeasible);
        }
        let m = self.rows.len();
        if m == 0 {
            self.make_dual_feasible();
            return Ok(Outcome::Optimal);
        }
        if !self.fresh || self.factor.dim() != m {
            self.restart()?;
        } else if self.dirty_primal {
            self.recompute_primal();
        }
        self.dirty_primal = false;
        let mut degenerate_run = 0usize;
        let mut verified = false;
        let start_iterations = self.iterations;
        let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
        let mut rho = vec![0.0; m];
        let mut col = vec![0.0; m];
        let mut flip_vec = vec![0.0; m];
        loop {
            if self.iterations - start_iterations > self.max_iterations {
                return Err(Error::Internal("simplex iteration limit reached".into()));
            }
            if self.factor.wants_refactor(REFACTOR_EVERY) {
                self.restart()?;
            }
            let bland = degenerate_run > STALL_LIMIT;

            // Pricing: choose the leaving position.
            let mut leave = NONBASIC;
            let mut best = 0.0;
            for p in 0..m {
                let j = self.basic[p];
                let v = self.x[j];
                let infeas = if v < self.lo[j] - PRIMAL_TOL {
                    self.lo[j] - v
                } else if v > self.hi[j] + PRIMAL_TOL {
                    v - self.hi[j]
                } else {
                    continue;
                };
                if bland {
                    if leave == NONBASIC || j < self.basic[leave] {
                        leave = p;
                    }
                } else {
                    let score = infeas * infeas / self.dse[p];
                    if score > best {
                        best = score;
                        leave = p;
                    }
                }
            }
            if leave == NONBASIC {
                if verified || self.factor.num_updates() == 0 {
                    self.make_dual_feasible_final();
                    return Ok(Outcome::Optimal);
                }
                self.restart()?;
                verified = true;
                continue;
            }
            verified = false;
            self.iterations += 1;

            let p = leave;
            let jl = self.basic[p];
            let below = self.x[jl] < self.lo[jl];
            let delta = if below {
                self.x[jl] - self.lo[jl]
            } else {
                self.x[jl] - self.hi[jl]
            };
            let s = if below { -1.0 } else { 1.0 };

            // rho = B^{-T} e_p
            rho.iter_mut().for_each(|v| *v = 0.0);
            rho[p] = 1.0;
            self.factor.btran(&mut rho, &mut self.scratch);
            let w_p: f64 = rho.iter().map(|v| v * v).sum();

            // pivot row over nonbasic variables
            for &j in &self.touched {
                self.alpha[j] = 0.0;
                self.touched_mark[j] = false;
            }
            self.touched.clear();
            for i in 0..m {
                let r = rho[i];
                if r == 0.0 {
                    continue;
                }
                for &(j, a) in &self.rows[i] {
                    if !self.touched_mark[j] {
                        self.touched_mark[j] = true;
                        self.touched.push(j);
                    }
                    self.alpha[j] += r * a;
                }
                let jlog = self.n + i;
                if !self.touched_mark[jlog] {
                    self.touched_mark[jlog] = true;
                    self.touched.push(jlog);
                }
                self.alpha[jlog] -= r;
            }

            // Ratio test with bound flipping.
            candidates.clear();
            for &j in &self.touched {
                if self.pos_of[j] != NONBASIC || self.hi[j] - self.lo[j] <= 0.0 {
                    continue;
                }
                let a = s * self.alpha[j];
                if !self.at_upper[j] && a > PIVOT_TOL {
                    candidates.push((j, self.d[j].max(0.0) / a, a.abs()));
                } else if self.at_upper[j] && a < -PIVOT_TOL {
                    candidates.push((j, self.d[j].min(0.0) / a, a.abs()));
                }
            }
            if candidates.is_empty() {
                return Ok(Outcome::Infeasible);
            }
            candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

            let mut first = 0;
            let mut flips_end = 0;
            if !bland {
                let mut slope = delta.abs();
                let mut found = None;
                for (k, &(j, _, a)) in candidates.iter().enumerate() {
                    let next = slope - a * (self.hi[j] - self.lo[j]);
                    if next <= 0.5 * PRIMAL_TOL {
                        found = Some(k);
                        break;
                    }
                    slope = next;
                }
                match found {
                    Some(k) => first = k,
                    // every candidate can be passed and the dual keeps rising
                    None => return Ok(Outcome::Infeasible),
                }
                flips_end = first;
            }
            // Harris-style choice among near-ties: prefer the largest pivot.
            let q_idx = if bland {
                let tmin = candidates[0].1;
                let mut qi = 0;
                for (k, c) in candidates.iter().enumerate() {
                    if c.1 > tmin {
                        break;
                    }
                    if c.0 < candidates[qi].0 {
                        qi = k;
                    }
                }
                qi
            } else {
                let mut bound = f64::INFINITY;
                for &(j, _, a) in &candidates[first..] {
                    bound = bound.min((self.d[j].abs() + DUAL_TOL) / a);
                }
                let mut qi = first;
                for (k, c) in candidates.iter().enumerate().skip(first) {
                    if c.1 > bound {
                        break;
                    }
                    if c.2 > candidates[qi].2 {
                        qi = k;
                    }
                }
                qi
            };
            let (q, theta_d, _) = candidates[q_idx];
            let q_alpha = self.alpha[q];

            // FTRAN the entering column.
            col.iter_mut().for_each(|v| *v = 0.0);
            self.column_of(q, &mut col);
            self.factor.ftran(&mut col, &mut self.scratch);
            let alpha_pq = col[p];
            if alpha_pq.abs() < PIVOT_TOL
                || (alpha_pq - q_alpha).abs() > 1e-6 * (1.0 + alpha_pq.abs())
            {
                // Numerical trouble: rebuild and retry.
                self.restart()?;
                degenerate_run += 1;
                continue;
            }

            // Dual update.
            for &j in &self.touched {
                if self.pos_of[j] == NONBASIC {
                    self.d[j] -= theta_d * s * self.alpha[j];
                }
            }
            self.d[q] = 0.0;
            self.d[jl] = -theta_d * s;

            // Bound flips for candidates passed by the ratio test.
            let mut any_flip = false;
            flip_vec.iter_mut().for_each(|v| *v = 0.0);
            for &(j, t, _) in &candidates[..flips_end] {
                if j == q || t > theta_d {
                    continue;
                }
                let old = self.x[j];
                self.at_upper[j] = !self.at_upper[j];
                let new = if self.at_upper[j] { self.hi[j] } else { self.lo[j] };
                self.x[j] = new;
                let step = new - old;
                if step != 0.0 {
                    any_flip = true;
                    if j < self.n {
                        for &(i, a) in &self.cols[j] {
                            flip_vec[i] += a * step;
                        }
                    } else {
                        flip_vec[j - self.n] -= step;
                    }
                }
            }
            if any_flip {
                self.factor.ftran(&mut flip_vec, &mut self.scratch);
                for pos in 0..m {
                    let v = flip_vec[pos];
                    if v != 0.0 {
                        self.x[self.basic[pos]] -= v;
                    }
                }
            }

            // Primal step.
            let target = if below { self.lo[jl] } else { self.hi[jl] };
            let theta_p = (self.x[jl] - target) / alpha_pq;
            if theta_p != 0.0 {
                for pos in 0..m {
                    let v = col[pos];
                    if v != 0.0 {
                        self.x[self.basic[pos]] -= theta_p * v;
                    }
                }
            }
            self.x[q] += theta_p;
            self.x[jl] = target;

            // Dual steepest-edge weights.
            let mut tau = std::mem::take(&mut self.work_row);
            tau.copy_from_slice(&rho);
            self.factor.ftran(&mut tau, &mut self.scratch);
            for pos in 0..m {
                if pos == p {
                    continue;
                }
                let ratio = col[pos] / alpha_pq;
                if ratio != 0.0 {
                    let w = self.dse[pos] - 2.0 * ratio * tau[pos] + ratio * ratio * w_p;
                    self.dse[pos] = w.max(1e-8);
                }
            }
            self.dse[p] = (w_p / (alpha_pq * alpha_pq)).max(1e-8);
            self.work_row = tau;

            // Basis change.
            self.basic[p] = q;
            self.pos_of[q] = p;
            self.pos_of[jl] = NONBASIC;
            self.at_upper[jl] = !below;
            self.factor.update(p, &col);

            if theta_d.abs() <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    /// Final touch after optimality: snaps tiny dual infeasibilities.
    fn make_dual_feasible_final(&mut self) {
        for j in 0..self.n + self.rows.len() {
            if self.pos_of[j] == NONBASIC {
                self.x[j] = if self.at_upper[j] { self.hi[j] } else { self.lo[j] };
            }
        }
    }

    /// Largest violation of any row by the clamped structural values.
    pub fn max_row_violation(&self) -> f64 {
        let x = self.values();
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let act: f64 = row.iter().map(|&(j, a)| a * x[j]).sum();
            let j = self.n + i;
            worst = worst.max(self.lo[j] - act).max(act - self.hi[j]);
        }
        worst
    }
}
