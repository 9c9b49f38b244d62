/// Single-channel `f64` working buffer used by the saliency pipeline.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![0.0; width * height])
    }

    #[cfg(test)]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn zip_map(&self, other: &Plane, f: impl Fn(f64, f64) -> f64) -> Plane {
        debug_assert_eq!((self.width, self.height), (other.width, other.height));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Plane::new(self.width, self.height, data)
    }

    pub fn add_assign(&mut self, other: &Plane) {
        debug_assert_eq!((self.width, self.height), (other.width, other.height));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&mut self, k: f64) {
        self.data.iter_mut().for_each(|v| *v *= k);
    }

    /// Separable convolution with edge replication. Both tap lists must have
    /// odd length; `row_taps` runs along x, `col_taps` along y.
    pub fn convolve_separable(&self, row_taps: &[f64], col_taps: &[f64]) -> Plane {
        debug_assert!(row_taps.len() % 2 == 1 && col_taps.len() % 2 == 1);
        let (w, h) = (self.width as isize, self.height as isize);
        let rh = (row_taps.len() / 2) as isize;
        let ch = (col_taps.len() / 2) as isize;

        let mut tmp = vec![0.0; self.data.len()];
        for r in 0..h {
            for c in 0..w {
                tmp[(r * w + c) as usize] = tap_sum(row_taps, |d| {
                    let cc = (c + d - rh).clamp(0, w - 1);
                    self.data[(r * w + cc) as usize]
                });
            }
        }
        let mut out = vec![0.0; self.data.len()];
        for r in 0..h {
            for c in 0..w {
                out[(r * w + c) as usize] = tap_sum(col_taps, |d| {
                    let rr = (r + d - ch).clamp(0, h - 1);
                    tmp[(rr * w + c) as usize]
                });
            }
        }
        Plane::new(self.width, self.height, out)
    }
}

/// Dot product of `taps` with samples `x(0..taps.len())`. Symmetric and
/// antisymmetric kernels are summed in mirrored pairs so that flipping the
/// input gives a bit-exact flipped (or negated) output.
fn tap_sum(taps: &[f64], x: impl Fn(isize) -> f64) -> f64 {
    let n = taps.len();
    let h = n / 2;
    let symmetric = (1..=h).all(|k| taps[h - k] == taps[h + k]);
    let antisymmetric = (1..=h).all(|k| taps[h - k] == -taps[h + k]);
    if symmetric {
        let mut acc = taps[h] * x(h as isize);
        for k in 1..=h {
            acc += taps[h + k] * (x((h + k) as isize) + x((h - k) as isize));
        }
        acc
    } else if antisymmetric {
        let mut acc = 0.0;
        for k in 1..=h {
            acc += taps[h + k] * (x((h + k) as isize) - x((h - k) as isize));
        }
        acc
    } else {
        taps.iter().enumerate().map(|(k, &t)| t * x(k as isize)).sum()
    }
}
