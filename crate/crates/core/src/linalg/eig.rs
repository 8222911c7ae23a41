//! Dense complex eigensolver: Householder reduction to Hessenberg form
//! followed by single-shift implicit QR with Wilkinson shifts. Eigenvectors
//! come from back-substitution on the triangular Schur factor.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{invalid, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Eigenvalues (with multiplicity) and, on request, unit right eigenvectors
/// stored column by column in the same order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: Option<CMatrix>,
    /// Total number of QR sweeps.
    pub sweeps: usize,
}

/// Complex Schur form `A = Z T Z^H`.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
    pub sweeps: usize,
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Column-major square work array.
struct Work {
    n: usize,
    data: Vec<Complex64>,
}

impl Work {
    fn from_matrix(a: &CMatrix) -> Self {
        Self {
            n: a.nrows(),
            data: a.as_slice().to_vec(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i + i * n] = ONE;
        }
        Self { n, data }
    }

    #[inline(always)]
    fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r + c * self.n]
    }

    #[inline(always)]
    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r + c * self.n] = v;
    }

    fn col(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.n..(c + 1) * self.n]
    }

    fn col_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.data[c * self.n..(c + 1) * self.n]
    }

    fn into_matrix(self) -> CMatrix {
        CMatrix::from_vec(self.n, self.n, self.data)
    }

    // cols (k, k+1) <- cols G^H over rows r0..=r1
    #[inline]
    fn rotate_cols(&mut self, k: usize, c: f64, s: Complex64, r0: usize, r1: usize) {
        let n = self.n;
        let sc = s.conj();
        let (left, right) = self.data.split_at_mut((k + 1) * n);
        let ck = &mut left[k * n..];
        let ck1 = &mut right[..n];
        for r in r0..=r1 {
            let x = ck[r];
            let y = ck1[r];
            ck[r] = x * c + y * sc;
            ck1[r] = y * c - x * s;
        }
    }
}

/// Rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO, a);
    }
    let na = a.norm();
    if na == 0.0 {
        let nb = b.norm();
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let norm = na.hypot(b.norm());
    let phase = a / na;
    let c = na / norm;
    let s = phase * b.conj() / norm;
    (c, s, phase * norm)
}

fn check_input(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(invalid(format!("eigensolver needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    if a.nrows() == 0 {
        return Err(invalid("eigensolver needs a nonempty matrix"));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(invalid("matrix has non-finite entries"));
    }
    Ok(())
}

// In-place Householder reduction; accumulates the unitary factor when `q` is given.
fn hessenberg(h: &mut Work, mut q: Option<&mut Work>) {
    let n = h.n;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let tail_norm2: f64 = (k + 2..n).map(|i| h.get(i, k).norm_sqr()).sum();
        if tail_norm2 == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let xnorm = (tail_norm2 + x0.norm_sqr()).sqrt();
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let v = &mut v[..len];
        v[0] = x0 - alpha;
        for i in 1..len {
            v[i] = h.get(k + 1 + i, k);
        }
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // column k maps to alpha e_1
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, ZERO);
        }
        // left: H[k+1.., j] -= 2 v (v^H H[k+1.., j]), fused with the
        // accumulation of w = H[:, k+1..] v for the right update
        w.fill(ZERO);
        for j in k + 1..n {
            let col = h.col_mut(j);
            let tail = &mut col[k + 1..];
            let s = dot_conj(v, tail) * 2.0;
            for (vi, ci) in v.iter().zip(tail.iter_mut()) {
                *ci -= vi * s;
            }
            let vj = v[j - k - 1];
            for (wr, cr) in w.iter_mut().zip(col.iter()) {
                *wr += cr * vj;
            }
        }
        // right: H[:, k+1..] -= 2 w v^H
        for (j, vj) in v.iter().enumerate() {
            let f = vj.conj() * 2.0;
            let col = h.col_mut(k + 1 + j);
            for (cr, wr) in col.iter_mut().zip(w.iter()) {
                *cr -= wr * f;
            }
        }
        if let Some(q) = q.as_deref_mut() {
            apply_right_reflector(q, k + 1, v, &mut w);
        }
    }
}

// sum conj(a_i) b_i with independent partial sums so the loop pipelines
#[inline]
fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for u in 0..4 {
            let x = a[4 * c + u];
            let y = b[4 * c + u];
            re[u] += x.re * y.re + x.im * y.im;
            im[u] += x.re * y.im - x.im * y.re;
        }
    }
    let mut out = Complex64::new(re.iter().sum(), im.iter().sum());
    for i in 4 * chunks..a.len() {
        out += a[i].conj() * b[i];
    }
    out
}

fn apply_right_reflector(m: &mut Work, offset: usize, v: &[Complex64], w: &mut [Complex64]) {
    let n = m.n;
    w.fill(ZERO);
    for (j, vj) in v.iter().enumerate() {
        let col = m.col(offset + j);
        for r in 0..n {
            w[r] += col[r] * vj;
        }
    }
    for (j, vj) in v.iter().enumerate() {
        let f = vj.conj() * 2.0;
        let col = m.col_mut(offset + j);
        for r in 0..n {
            col[r] -= w[r] * f;
        }
    }
}

// Bulges chased together in one pass.
const TRAIN: usize = 8;
// Blocks below this size go straight to the single-shift iteration.
const NMIN: usize = 75;
// Skip the sweep when the deflation window removed more than this percentage.
const NIBBLE: usize = 14;

// Is `H[k, k-1]` negligible relative to its neighbours (zlahqr test)?
fn negligible(h: &Work, k: usize, l: usize, iu: usize, ulp: f64, smlnum: f64) -> bool {
    let sub = h.get(k, k - 1);
    if cabs1(sub) <= smlnum {
        return true;
    }
    let mut tst = cabs1(h.get(k - 1, k - 1)) + cabs1(h.get(k, k));
    if tst == 0.0 {
        if k >= l + 2 {
            tst += h.get(k - 1, k - 2).re.abs();
        }
        if k < iu {
            tst += h.get(k + 1, k).re.abs();
        }
    }
    if sub.re.abs() <= ulp * tst {
        let ab = cabs1(sub).max(cabs1(h.get(k - 1, k)));
        let ba = cabs1(sub).min(cabs1(h.get(k - 1, k)));
        let diff = h.get(k - 1, k - 1) - h.get(k, k);
        let aa = cabs1(h.get(k, k)).max(cabs1(diff));
        let bb = cabs1(h.get(k, k)).min(cabs1(diff));
        let s = aa + ab;
        if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
            return true;
        }
    }
    false
}

fn tolerances(n: usize) -> (f64, f64) {
    let ulp = f64::EPSILON;
    (ulp, f64::MIN_POSITIVE * (n as f64 / ulp))
}

// QR iteration on Hessenberg `h`. With `full` the whole triangular factor
// is formed; otherwise only the active window is updated.
fn hessenberg_qr(h: &mut Work, z: Option<&mut Work>, full: bool) -> Result<usize> {
    let n = h.n;
    if n < NMIN {
        small_qr(h, z, full, 0, n - 1)
    } else {
        aed_qr(h, z, full)
    }
}

// Single-shift QR with Wilkinson and exceptional shifts on rows/cols lo..=hi.
fn small_qr(h: &mut Work, mut z: Option<&mut Work>, full: bool, lo: usize, hi: usize) -> Result<usize> {
    let n = h.n;
    if hi == lo {
        return Ok(0);
    }
    let (ulp, smlnum) = tolerances(n);
    let itmax = 30 * (hi - lo + 1).max(10);
    let mut sweeps = 0usize;
    let mut scratch = Sweep::new(n);
    let mut i = hi as isize;
    while i >= lo as isize {
        let iu = i as usize;
        let mut l = lo;
        let mut converged = false;
        for its in 0..=itmax {
            let mut k = iu;
            while k > l && !negligible(h, k, l, iu, ulp, smlnum) {
                k -= 1;
            }
            l = k;
            if l > lo {
                h.set(l, l - 1, ZERO);
            }
            if l >= iu {
                converged = true;
                break;
            }
            let shift = if its == 10 {
                h.get(l, l) + 0.75 * h.get(l + 1, l).re.abs()
            } else if its == 20 {
                h.get(iu, iu) + 0.75 * h.get(iu, iu - 1).re.abs()
            } else {
                wilkinson(h.get(iu - 1, iu - 1), h.get(iu - 1, iu), h.get(iu, iu - 1), h.get(iu, iu))
            };
            sweeps += 1;
            scratch.run(h, z.as_deref_mut(), full, l, iu, shift);
        }
        if !converged {
            return Err(Error::NonConvergence {
                index: iu,
                iterations: itmax,
            });
        }
        i = l as isize - 1;
    }
    Ok(sweeps)
}

struct Sweep {
    rotations: Vec<(f64, Complex64)>,
    applied: Vec<usize>,
}

impl Sweep {
    fn new(n: usize) -> Self {
        Self {
            rotations: Vec::with_capacity(n),
            applied: vec![0; n],
        }
    }

    // One implicit single-shift sweep over the block l..=iu. Row rotations are
    // recorded and applied column by column just before a column is needed,
    // so each column is swept contiguously.
    fn run(&mut self, h: &mut Work, mut z: Option<&mut Work>, full: bool, l: usize, iu: usize, shift: Complex64) {
        let n = h.n;
        let (i1, i2) = if full { (0, n - 1) } else { (l, iu) };
        let rotations = &mut self.rotations;
        let applied = &mut self.applied;
        rotations.clear();
        for j in l..=i2 {
            applied[j] = 0;
        }
        let mut x = h.get(l, l) - shift;
        let mut y = h.get(l + 1, l);
        for k in l..iu {
            if k > l {
                flush_column(h, k - 1, l, rotations, applied);
                x = h.get(k, k - 1);
                y = h.get(k + 1, k - 1);
            }
            let (c, s, r) = givens(x, y);
            rotations.push((c, s));
            if k > l {
                h.set(k, k - 1, r);
                h.set(k + 1, k - 1, ZERO);
                applied[k - 1] = rotations.len();
            }
            flush_column(h, k, l, rotations, applied);
            flush_column(h, k + 1, l, rotations, applied);
            h.rotate_cols(k, c, s, i1, (k + 2).min(iu));
            if let Some(z) = z.as_deref_mut() {
                z.rotate_cols(k, c, s, 0, z.n - 1);
            }
        }
        for j in l..=i2 {
            flush_column(h, j, l, rotations, applied);
        }
    }
}

// Applies the pending row rotations `l + r` (for `l + r <= j`) to column `j`.
#[inline]
fn flush_column(h: &mut Work, j: usize, l: usize, rotations: &[(f64, Complex64)], applied: &mut [usize]) {
    let upto = rotations.len().min(j + 1 - l);
    let start = applied[j];
    if start >= upto {
        return;
    }
    let col = h.col_mut(j);
    for (r, &(c, s)) in rotations.iter().enumerate().take(upto).skip(start) {
        let k = l + r;
        let x = col[k];
        let y = col[k + 1];
        col[k] = x * c + s * y;
        col[k + 1] = y * c - s.conj() * x;
    }
    applied[j] = upto;
}

// Shift count and deflation window for an active block of the given size.
fn window_sizes(size: usize) -> (usize, usize) {
    let ns = if size < 150 {
        10
    } else if size < 590 {
        let v = (size as f64 / (size as f64).log2()).round() as usize;
        (v.max(10) / 2) * 2
    } else {
        64
    };
    let nw = if size <= 500 { ns } else { 3 * ns / 2 };
    (ns, nw.min(size))
}

// Multishift-style driver: aggressive early deflation on a bottom window,
// then single-shift sweeps driven by the undeflated window eigenvalues.
fn aed_qr(h: &mut Work, mut z: Option<&mut Work>, full: bool) -> Result<usize> {
    let n = h.n;
    let (ulp, smlnum) = tolerances(n);
    let itmax = 30 * n;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    let mut cycles = 0usize;
    let mut rotations = Vec::new();
    let mut hi = n as isize - 1;
    while hi >= 0 {
        let iu = hi as usize;
        let mut l = iu;
        while l > 0 && !negligible(h, l, 0, iu, ulp, smlnum) {
            l -= 1;
        }
        if l > 0 {
            h.set(l, l - 1, ZERO);
        }
        if l == iu {
            hi -= 1;
            continue;
        }
        let size = iu - l + 1;
        if size < NMIN {
                sweeps += small_qr(h, z.as_deref_mut(), full, l, iu)?;
            hi = l as isize - 1;
            continue;
        }
        cycles += 1;
        if cycles > itmax {
            return Err(Error::NonConvergence {
                index: iu,
                iterations: itmax,
            });
        }
        let (ns, nw) = window_sizes(size);
        let (nd, shifts) = deflation_window(h, z.as_deref_mut(), full, l, iu, nw)?;
        hi = iu as isize - nd as isize;
        stalled = if nd == 0 { stalled + 1 } else { 0 };
        if nd > 0 && nd * 100 > NIBBLE * nw {
            continue;
        }
        let top = hi as usize;
        if top <= l {
            continue;
        }
        let shifts: Vec<Complex64> = if stalled > 0 && stalled % 6 == 0 || shifts.is_empty() {
            let base = h.get(top, top) + 0.75 * h.get(top, top - 1).re.abs();
            vec![base]
        } else {
            let take = ns.min(shifts.len());
            shifts[shifts.len() - take..].to_vec()
        };
        sweeps += shifts.len();
        for train in shifts.chunks(TRAIN) {
            bulge_train(h, z.as_deref_mut(), full, l, top, train, &mut rotations);
        }
    }
    Ok(sweeps)
}

// Chases one single-shift bulge per shift through l..=iu as a tight train
// (bulge j trails bulge j-1 by two rows). The chase runs on a diagonal window
// per slab of time steps; the far blocks receive the recorded rotations
// afterwards in cache-sized passes.
fn bulge_train(
    h: &mut Work,
    mut z: Option<&mut Work>,
    full: bool,
    l: usize,
    iu: usize,
    shifts: &[Complex64],
    rots: &mut Vec<(usize, f64, Complex64)>,
) {
    let n = h.n;
    let m = shifts.len();
    if m == 0 || iu <= l {
        return;
    }
    let (i1, i2) = if full { (0, n - 1) } else { (l, iu) };
    let total = (iu - l) + 2 * (m - 1);
    let slab = (2 * m).max(16);
    let mut t0 = 0;
    while t0 < total {
        let t1 = (t0 + slab).min(total);
        let lo_pos = (l + t0).saturating_sub(2 * (m - 1)).max(l);
        let hi_pos = (l + t1 - 1).min(iu - 1);
        let a = lo_pos.saturating_sub(1).max(l);
        let b = (hi_pos + 2).min(iu);
        rots.clear();
        for t in t0..t1 {
            for (j, &shift) in shifts.iter().enumerate() {
                let pos = (l + t) as isize - 2 * j as isize;
                if pos < l as isize || pos >= iu as isize {
                    continue;
                }
                let k = pos as usize;
                let (c, s) = if k == l {
                    let (c, s, _) = givens(h.get(l, l) - shift, h.get(l + 1, l));
                    (c, s)
                } else {
                    let (c, s, r) = givens(h.get(k, k - 1), h.get(k + 1, k - 1));
                    h.set(k, k - 1, r);
                    h.set(k + 1, k - 1, ZERO);
                    (c, s)
                };
                for col in k..=b {
                    let x = h.get(k, col);
                    let y = h.get(k + 1, col);
                    h.set(k, col, x * c + s * y);
                    h.set(k + 1, col, y * c - s.conj() * x);
                }
                h.rotate_cols(k, c, s, a, (k + 2).min(iu));
                rots.push((k, c, s));
            }
        }
        for col in b + 1..=i2.max(b) {
            if col > i2 {
                break;
            }
            let v = h.col_mut(col);
            for &(k, c, s) in rots.iter() {
                let x = v[k];
                let y = v[k + 1];
                v[k] = x * c + s * y;
                v[k + 1] = y * c - s.conj() * x;
            }
        }
        if a > i1 {
            rotate_cols_batched(h, i1, a, rots);
        }
        if let Some(z) = z.as_deref_mut() {
            let rows = z.n;
            rotate_cols_batched(z, 0, rows, rots);
        }
        t0 = t1;
    }
}

// Applies recorded column rotations to rows r0..r1 in row chunks.
fn rotate_cols_batched(m: &mut Work, r0: usize, r1: usize, rots: &[(usize, f64, Complex64)]) {
    const CHUNK: usize = 48;
    let mut start = r0;
    while start < r1 {
        let end = (start + CHUNK).min(r1);
        for &(k, c, s) in rots {
            m.rotate_cols(k, c, s, start, end - 1);
        }
        start = end;
    }
}

// Swaps the adjacent diagonal entries k, k+1 of upper triangular `t`,
// accumulating the rotation into `v`.
fn swap_diagonal(t: &mut Work, v: &mut Work, k: usize) {
    let n = t.n;
    let t11 = t.get(k, k);
    let t22 = t.get(k + 1, k + 1);
    let (c, s, _) = givens(t.get(k, k + 1), t22 - t11);
    for col in k + 2..n {
        let x = t.get(k, col);
        let y = t.get(k + 1, col);
        t.set(k, col, x * c + s * y);
        t.set(k + 1, col, y * c - s.conj() * x);
    }
    if k > 0 {
        t.rotate_cols(k, c, s, 0, k - 1);
    }
    t.set(k, k, t22);
    t.set(k + 1, k + 1, t11);
    v.rotate_cols(k, c, s, 0, n - 1);
}

fn block(h: &Work, r0: usize, r1: usize, c0: usize, c1: usize) -> CMatrix {
    CMatrix::from_fn(r1 - r0, c1 - c0, |r, c| h.get(r0 + r, c0 + c))
}

fn put_block(h: &mut Work, r0: usize, c0: usize, m: &CMatrix) {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            h.set(r0 + r, c0 + c, m[(r, c)]);
        }
    }
}

// Aggressive early deflation on rows/cols kw..=iu with kw = iu + 1 - nw.
// Returns the number of deflated eigenvalues (now at the bottom of the
// block) and the undeflated window eigenvalues for use as shifts.
fn deflation_window(
    h: &mut Work,
    z: Option<&mut Work>,
    full: bool,
    l: usize,
    iu: usize,
    nw: usize,
) -> Result<(usize, Vec<Complex64>)> {
    let n = h.n;
    let (ulp, smlnum) = tolerances(n);
    let kw = iu + 1 - nw;
    let spike = if kw > l { h.get(kw, kw - 1) } else { ZERO };
    let mut t = Work {
        n: nw,
        data: vec![ZERO; nw * nw],
    };
    for c in 0..nw {
        for r in 0..nw.min(c + 2) {
            t.set(r, c, h.get(kw + r, kw + c));
        }
    }
    let mut v = Work::identity(nw);
    small_qr(&mut t, Some(&mut v), true, 0, nw - 1)?;
    for c in 0..nw {
        for r in c + 1..nw {
            t.set(r, c, ZERO);
        }
    }
    let mut ns = nw;
    let mut ilst = 0;
    while ilst < ns {
        let j = ns - 1;
        let mut foo = cabs1(t.get(j, j));
        if foo == 0.0 {
            foo = cabs1(spike);
        }
        if cabs1(spike) * cabs1(v.get(0, j)) <= smlnum.max(ulp * foo) {
            ns -= 1;
        } else {
            for k in (ilst..j).rev() {
                swap_diagonal(&mut t, &mut v, k);
            }
            ilst += 1;
        }
    }
    let shifts: Vec<Complex64> = (0..ns).map(|j| t.get(j, j)).collect();
    let mut top = ZERO;
    if ns > 0 && spike != ZERO {
        let mut x: Vec<Complex64> = (0..ns).map(|j| spike * v.get(0, j).conj()).collect();
        top = x[0];
        if ns > 1 {
            // reflector taking the spike to a multiple of e_1
            let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
            let alpha = -phase * xnorm;
            x[0] -= alpha;
            let unorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if unorm > 0.0 {
                let u = nalgebra::DVector::from_iterator(ns, x.iter().map(|c| c / unorm));
                let p = CMatrix::identity(ns, ns) - (&u * u.adjoint()) * Complex64::new(2.0, 0.0);
                let rows = block(&t, 0, ns, 0, nw);
                put_block(&mut t, 0, 0, &(&p * rows));
                let cols = block(&t, 0, ns, 0, ns);
                put_block(&mut t, 0, 0, &(cols * &p));
                let vc = block(&v, 0, nw, 0, ns);
                put_block(&mut v, 0, 0, &(vc * &p));
            }
            top = alpha;
            let mut t11 = Work {
                n: ns,
                data: block(&t, 0, ns, 0, ns).as_slice().to_vec(),
            };
            let mut q = Work::identity(ns);
            hessenberg(&mut t11, Some(&mut q));
            let q = q.into_matrix();
            put_block(&mut t, 0, 0, &t11.into_matrix());
            if ns < nw {
                let t12 = block(&t, 0, ns, ns, nw);
                put_block(&mut t, 0, ns, &(q.adjoint() * t12));
            }
            let vc = block(&v, 0, nw, 0, ns);
            put_block(&mut v, 0, 0, &(vc * q));
        }
    }
    if kw > l {
        h.set(kw, kw - 1, top);
        for r in kw + 1..=iu {
            h.set(r, kw - 1, ZERO);
        }
    }
    put_block(h, kw, kw, &t.into_matrix());
    let v = v.into_matrix();
    let i1 = if full { 0 } else { l };
    if kw > i1 {
        let above = block(h, i1, kw, kw, iu + 1);
        put_block(h, i1, kw, &(above * &v));
    }
    if full && iu + 1 < n {
        let right = block(h, kw, iu + 1, iu + 1, n);
        put_block(h, kw, iu + 1, &(v.adjoint() * right));
    }
    if let Some(z) = z {
        let zc = block(z, 0, z.n, kw, iu + 1);
        put_block(z, 0, kw, &(zc * &v));
    }
    Ok((nw - ns, shifts))
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let e1 = mean + disc;
    let e2 = mean - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Complex Schur decomposition `A = Z T Z^H`.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    check_input(a)?;
    let mut h = Work::from_matrix(a);
    let mut z = Work::identity(a.nrows());
    hessenberg(&mut h, Some(&mut z));
    let sweeps = hessenberg_qr(&mut h, Some(&mut z), true)?;
    // clear the strictly lower part left by rounding in deflated blocks
    let n = h.n;
    for c in 0..n {
        for r in c + 1..n {
            h.set(r, c, ZERO);
        }
    }
    Ok(Schur {
        t: h.into_matrix(),
        z: z.into_matrix(),
        sweeps,
    })
}

/// All eigenvalues of a dense complex matrix (no vectors).
pub fn eigvals(a: &CMatrix) -> Result<Vec<Complex64>> {
    check_input(a)?;
    let mut h = Work::from_matrix(a);
    hessenberg(&mut h, None);
    hessenberg_qr(&mut h, None, false)?;
    Ok((0..h.n).map(|i| h.get(i, i)).collect())
}

/// Eigenvalues and optionally unit right eigenvectors of a dense complex
/// matrix. Returned pairs satisfy `||A v - lambda v|| <= 1e-10 ||A||_F sqrt(n)`
/// for matrices that are not pathologically non-normal.
pub fn eig(a: &CMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    if !want_vectors {
        check_input(a)?;
        let mut h = Work::from_matrix(a);
        hessenberg(&mut h, None);
        let sweeps = hessenberg_qr(&mut h, None, false)?;
        return Ok(EigenDecomposition {
            values: (0..h.n).map(|i| h.get(i, i)).collect(),
            vectors: None,
            sweeps,
        });
    }
    let Schur { t, z, sweeps } = schur(a)?;
    let n = t.nrows();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let tnorm = t.iter().map(|x| cabs1(*x)).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE * n as f64 / f64::EPSILON);
    let mut vectors = CMatrix::zeros(n, n);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        let lambda = values[k];
        x.fill(ZERO);
        x[k] = ONE;
        for i in (0..k).rev() {
            let mut s = t[(i, k)];
            for j in i + 1..k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            x[i] = -s / d;
            let big = x[i].norm();
            if big > 1e100 {
                for v in x[..=k].iter_mut() {
                    *v /= big;
                }
            }
        }
        let col = z.columns(0, k + 1) * nalgebra::DVector::from_column_slice(&x[..=k]);
        let norm = col.norm();
        for r in 0..n {
            vectors[(r, k)] = col[r] / norm;
        }
    }
    Ok(EigenDecomposition {
        values,
        vectors: Some(vectors),
        sweeps,
    })
}

/// Max over pairs of `||A v - lambda v||_2` with unit `v`.
pub fn max_residual(a: &CMatrix, dec: &EigenDecomposition) -> Option<f64> {
    let vectors = dec.vectors.as_ref()?;
    let mut worst: f64 = 0.0;
    for (k, lambda) in dec.values.iter().enumerate() {
        let v = vectors.column(k);
        let r = a * v - v * *lambda;
        worst = worst.max(r.norm());
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_spectrum() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]));
        let vals = sorted(eigvals(&a).unwrap());
        let expected = [c(-3.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).norm() < 1e-14);
        }
    }

    #[test]
    fn companion_roots() {
        // z^2 - 1
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let vals = sorted(eigvals(&a).unwrap());
        assert!((vals[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((vals[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn residual_contract_random() {
        for (n, seed) in [(1, 1), (2, 2), (7, 3), (50, 4)] {
            let a = random_matrix(n, seed);
            let dec = eig(&a, true).unwrap();
            let bound = 1e-10 * a.norm() * (n as f64).sqrt();
            assert!(max_residual(&a, &dec).unwrap() <= bound, "n = {n}");
        }
    }

    #[test]
    fn schur_reconstructs() {
        let a = random_matrix(20, 9);
        let s = schur(&a).unwrap();
        let back = &s.z * &s.t * s.z.adjoint();
        assert!((back - &a).norm() < 1e-12 * a.norm());
        let unitary = s.z.adjoint() * &s.z - CMatrix::identity(20, 20);
        assert!(unitary.norm() < 1e-12);
    }

    #[test]
    fn trace_and_nalgebra_agree() {
        let a = random_matrix(30, 11);
        let vals = eigvals(&a).unwrap();
        let trace: Complex64 = (0..30).map(|i| a[(i, i)]).sum();
        let sum: Complex64 = vals.iter().sum();
        assert!((trace - sum).norm() < 1e-11);
        let reference = nalgebra::Schur::new(a.clone()).eigenvalues().unwrap();
        let ours = sorted(vals);
        let theirs = sorted(reference.iter().copied().collect());
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn large_blocks_known_spectrum() {
        // A = Q D Q^H with Q unitary from a QR factorization; D has clusters
        let n = 180;
        let q = random_matrix(n, 21).qr().q();
        let d: Vec<Complex64> = (0..n).map(|i| c((i / 3) as f64, 0.1 * (i % 3) as f64)).collect();
        let a = &q * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())) * q.adjoint();
        let mut vals = eigvals(&a).unwrap();
        for e in d {
            let (at, dist) = vals
                .iter()
                .enumerate()
                .map(|(i, v)| (i, (v - e).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            assert!(dist < 1e-9, "{e}: {dist}");
            vals.swap_remove(at);
        }
    }

    #[test]
    fn large_blocks_residual_and_schur() {
        let n = 160;
        let a = random_matrix(n, 31);
        let dec = eig(&a, true).unwrap();
        assert!(max_residual(&a, &dec).unwrap() <= 1e-10 * a.norm() * (n as f64).sqrt());
        let s = schur(&a).unwrap();
        assert!((&s.z * &s.t * s.z.adjoint() - &a).norm() < 1e-11 * a.norm());
        assert!((s.z.adjoint() * &s.z - CMatrix::identity(n, n)).norm() < 1e-11);
        let only = sorted(eigvals(&a).unwrap());
        for (x, y) in only.iter().zip(sorted(dec.values)) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn large_perturbed_diagonal_matches_nalgebra() {
        // degenerate diagonal plus a small dense coupling, like a Galerkin model
        let n = 120;
        let mut a = random_matrix(n, 41) * c(0.05, 0.0);
        for i in 0..n {
            a[(i, i)] += c(((i as f64).sqrt()).floor().powi(2), 0.0);
        }
        let ours = sorted(eigvals(&a).unwrap());
        let theirs = sorted(nalgebra::Schur::new(a.clone()).eigenvalues().unwrap().iter().copied().collect());
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigvals(&CMatrix::zeros(2, 3)).is_err());
        assert!(eigvals(&CMatrix::zeros(0, 0)).is_err());
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = c(f64::NAN, 0.0);
        assert!(eigvals(&a).is_err());
    }

    #[test]
    fn jordan_block_and_zero_matrix() {
        let z = eigvals(&CMatrix::zeros(5, 5)).unwrap();
        assert!(z.iter().all(|v| v.norm() == 0.0));
        let mut j = CMatrix::zeros(4, 4);
        for i in 0..3 {
            j[(i, i + 1)] = ONE;
        }
        let vals = eigvals(&j).unwrap();
        assert!(vals.iter().all(|v| v.norm() < 1e-12));
    }
}
