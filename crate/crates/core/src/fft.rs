//! Complex discrete Fourier transforms of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley–Tukey kernel; any
//! other length goes through Bluestein's chirp-z reformulation on top of a
//! power-of-two kernel. Transforms are unnormalized:
//!
//! * forward: `X_k = Σ_j x_j e^{-2πi jk/n}`
//! * inverse: `x_j = Σ_k X_k e^{+2πi jk/n}`

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::Complex;

#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

impl Fft {
    /// Plans a transform of length `len` (`len >= 1`).
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let kind = if len.is_power_of_two() {
            Kind::Radix2(Radix2::new(len))
        } else {
            Kind::Bluestein(Bluestein::new(len))
        };
        Fft { len, kind }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, buf: &mut [Complex]) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        match &self.kind {
            Kind::Radix2(p) => p.forward(buf),
            Kind::Bluestein(p) => p.forward(buf),
        }
    }

    pub fn inverse(&self, buf: &mut [Complex]) {
        // conj ∘ forward ∘ conj
        for z in buf.iter_mut() {
            *z = z.conj();
        }
        self.forward(buf);
        for z in buf.iter_mut() {
            *z = z.conj();
        }
    }
}

/// `e^{-2πi num/den}` with the angle reduced before evaluation.
fn root(num: usize, den: usize) -> Complex {
    let angle = -2.0 * PI * ((num % den) as f64) / den as f64;
    Complex::new(angle.cos(), angle.sin())
}

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    log2: u32,
    twiddles: Vec<Complex>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        let twiddles = (0..len / 2).map(|j| root(j, len)).collect();
        Radix2 {
            len,
            log2: len.trailing_zeros(),
            twiddles,
        }
    }

    fn forward(&self, buf: &mut [Complex]) {
        let n = self.len;
        if n == 1 {
            return;
        }
        let shift = usize::BITS - self.log2;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for block in buf.chunks_exact_mut(size) {
                let (lo, hi) = block.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = self.twiddles[j * stride] * *b;
                    *b = *a - t;
                    *a += t;
                }
            }
            size *= 2;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    inner: Radix2,
    chirp: Vec<Complex>,
    kernel: Vec<Complex>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let m = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(m);
        // chirp_n = e^{-πi n²/len}; n² is reduced mod 2·len to keep the angle small
        let chirp: Vec<Complex> = (0..len)
            .map(|n| root((n * n) % (2 * len), 2 * len))
            .collect();
        let mut kernel = vec![Complex::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for n in 1..len {
            kernel[n] = chirp[n].conj();
            kernel[m - n] = chirp[n].conj();
        }
        inner.forward(&mut kernel);
        Bluestein {
            len,
            inner,
            chirp,
            kernel,
        }
    }

    fn forward(&self, buf: &mut [Complex]) {
        let m = self.inner.len;
        let mut work = vec![Complex::new(0.0, 0.0); m];
        for ((w, x), c) in work.iter_mut().zip(buf.iter()).zip(&self.chirp) {
            *w = *x * *c;
        }
        self.inner.forward(&mut work);
        for (w, k) in work.iter_mut().zip(&self.kernel) {
            *w = (*w * *k).conj();
        }
        // inverse of size m via conjugation, then scale
        self.inner.forward(&mut work);
        let scale = 1.0 / m as f64;
        for ((out, w), c) in buf.iter_mut().zip(&work).take(self.len).zip(&self.chirp) {
            *out = w.conj() * scale * *c;
        }
    }
}
