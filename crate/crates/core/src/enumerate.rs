//! Fincke-Pohst / Schnorr-Euchner enumeration over a fixed basis.

use crate::Error;

/// Precomputed data for enumerating lattice points near a target.
#[derive(Clone, Debug)]
pub struct Sphere {
    n: usize,
    gen: Vec<f64>,  // row-major n×n generator
    ginv: Vec<f64>, // row-major inverse of the generator
    // Gram = Rᵀ R with R upper triangular; stored as mu[i][j] = R_ij / R_ii and diag q_i = R_ii².
    mu: Vec<f64>,
    q: Vec<f64>,
}

pub struct Budget {
    pub nodes: u64,
    pub max_nodes: u64,
}

impl Budget {
    pub fn new(max_nodes: u64) -> Self {
        Budget { nodes: 0, max_nodes }
    }
    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }
    #[inline]
    fn tick(&mut self) -> Result<(), Error> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            Err(Error::Budget(self.max_nodes))
        } else {
            Ok(())
        }
    }
}

impl Sphere {
    pub fn new(gen: &[Vec<f64>]) -> Result<Self, Error> {
        let n = gen.len();
        let flat: Vec<f64> = gen.iter().flatten().copied().collect();
        let ginv = invert(&flat, n).ok_or(Error::Singular)?;
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = (0..n).map(|k| flat[i * n + k] * flat[j * n + k]).sum();
            }
        }
        // Cholesky Gram = Rᵀ R
        let mut r = vec![0.0; n * n];
        for i in 0..n {
            let mut s = gram[i * n + i];
            for k in 0..i {
                s -= r[k * n + i] * r[k * n + i];
            }
            if s <= 0.0 {
                return Err(Error::Singular);
            }
            let d = s.sqrt();
            r[i * n + i] = d;
            for j in i + 1..n {
                let mut s = gram[i * n + j];
                for k in 0..i {
                    s -= r[k * n + i] * r[k * n + j];
                }
                r[i * n + j] = s / d;
            }
        }
        let mut mu = vec![0.0; n * n];
        let mut q = vec![0.0; n];
        for i in 0..n {
            q[i] = r[i * n + i] * r[i * n + i];
            for j in i + 1..n {
                mu[i * n + j] = r[i * n + j] / r[i * n + i];
            }
        }
        Ok(Sphere { n, gen: flat, ginv, mu, q })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// u = y·G⁻¹
    pub fn coords(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut u = vec![0.0; n];
        for (k, &yk) in y.iter().enumerate() {
            if yk != 0.0 {
                let row = &self.ginv[k * n..(k + 1) * n];
                for (uj, g) in u.iter_mut().zip(row) {
                    *uj += yk * g;
                }
            }
        }
        u
    }

    /// x = z·G
    pub fn point(&self, z: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = vec![0.0; n];
        for (k, &zk) in z.iter().enumerate() {
            if zk != 0.0 {
                let row = &self.gen[k * n..(k + 1) * n];
                for (xj, g) in x.iter_mut().zip(row) {
                    *xj += zk * g;
                }
            }
        }
        x
    }

    /// Visits the integer coordinates of every lattice point with
    /// ‖x − y‖² ≤ radius_sq. The callback receives (z, squared distance).
    pub fn for_each_within(
        &self,
        y: &[f64],
        radius_sq: f64,
        budget: &mut Budget,
        mut visit: impl FnMut(&[f64], f64),
    ) -> Result<(), Error> {
        let n = self.n;
        if radius_sq < 0.0 {
            return Ok(());
        }
        let u = self.coords(y);
        let mut z = vec![0.0; n];
        let mut c = vec![0.0; n]; // centre at each level
        let mut partial = vec![0.0; n + 1]; // partial[i] = contribution of levels > i... stored at i+1
        let mut upper = vec![0.0; n];
        let mut i = n - 1;
        // initialise level n-1
        c[i] = u[i];
        let span = (radius_sq / self.q[i]).sqrt();
        z[i] = (c[i] - span).ceil();
        upper[i] = (c[i] + span).floor();
        loop {
            budget.tick()?;
            if z[i] > upper[i] {
                if i == n - 1 {
                    return Ok(());
                }
                i += 1;
                z[i] += 1.0;
                continue;
            }
            let diff = z[i] - c[i];
            let val = partial[i + 1] + self.q[i] * diff * diff;
            if i == 0 {
                if val <= radius_sq {
                    visit(&z, val);
                }
                z[0] += 1.0;
                continue;
            }
            partial[i] = val;
            let rem = radius_sq - val;
            i -= 1;
            let mut s = u[i];
            for j in i + 1..n {
                s -= self.mu[i * n + j] * (z[j] - u[j]);
            }
            c[i] = s;
            let span = (rem.max(0.0) / self.q[i]).sqrt();
            z[i] = (c[i] - span).ceil();
            upper[i] = (c[i] + span).floor();
        }
    }

    /// All lattice points within squared distance `radius_sq` of y, with
    /// their squared distances recomputed from coordinates.
    pub fn list(&self, y: &[f64], radius_sq: f64, budget: &mut Budget) -> Result<Vec<(Vec<f64>, f64)>, Error> {
        let mut zs = Vec::new();
        self.for_each_within(y, radius_sq, budget, |z, _| zs.push(z.to_vec()))?;
        Ok(zs
            .into_iter()
            .map(|z| {
                let x = self.point(&z);
                let d = dist_sq(&x, y);
                (x, d)
            })
            .collect())
    }

    /// Closest lattice point (Schnorr-Euchner zig-zag with shrinking radius).
    /// Ties resolve to whichever point the traversal meets first; callers
    /// needing a canonical tie-break use `list` at the returned distance.
    pub fn nearest(&self, y: &[f64], budget: &mut Budget) -> Result<(Vec<f64>, f64), Error> {
        let n = self.n;
        let u = self.coords(y);
        // Babai start gives an initial radius
        let mut best_z: Vec<f64> = vec![0.0; n];
        {
            let mut zc = vec![0.0; n];
            for i in (0..n).rev() {
                let mut s = u[i];
                for j in i + 1..n {
                    s -= self.mu[i * n + j] * (zc[j] - u[j]);
                }
                zc[i] = s.round();
            }
            best_z.copy_from_slice(&zc);
        }
        let mut best = dist_sq(&self.point(&best_z), y) * (1.0 + 1e-12) + 1e-300;
        let mut z = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut step = vec![0.0; n];
        let mut dir = vec![0.0; n];
        let mut partial = vec![0.0; n + 1];
        let mut i = n - 1;
        c[i] = u[i];
        z[i] = c[i].round();
        dir[i] = if c[i] >= z[i] { 1.0 } else { -1.0 };
        step[i] = 0.0;
        loop {
            budget.tick()?;
            let diff = z[i] - c[i];
            let val = partial[i + 1] + self.q[i] * diff * diff;
            if val < best {
                if i == 0 {
                    best = val;
                    best_z.copy_from_slice(&z);
                    // continue at the same level with the next zig-zag value
                } else {
                    partial[i] = val;
                    i -= 1;
                    let mut s = u[i];
                    for j in i + 1..n {
                        s -= self.mu[i * n + j] * (z[j] - u[j]);
                    }
                    c[i] = s;
                    z[i] = s.round();
                    dir[i] = if c[i] >= z[i] { 1.0 } else { -1.0 };
                    step[i] = 0.0;
                    continue;
                }
            } else {
                if i == n - 1 {
                    break;
                }
                i += 1;
            }
            // next zig-zag candidate at level i
            step[i] += 1.0;
            let s = step[i];
            let off = if s as i64 % 2 == 1 { dir[i] * ((s + 1.0) / 2.0) } else { -dir[i] * (s / 2.0) };
            z[i] = c[i].round() + off;
        }
        let x = self.point(&best_z);
        let d = dist_sq(&x, y);
        Ok((x, d))
    }
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Dense inverse by partial-pivot Gauss-Jordan.
pub fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x * n + col].abs().total_cmp(&m[y * n + col].abs()))?;
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
        }
        let p = 1.0 / m[col * n + col];
        for j in 0..n {
            m[col * n + j] *= p;
            inv[col * n + j] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                m[r * n + j] -= f * m[col * n + j];
                inv[r * n + j] -= f * inv[col * n + j];
            }
        }
    }
    Some(inv)
}
