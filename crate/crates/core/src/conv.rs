//! Linear convolution: spectral (FFT) with a direct-sum fallback.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Work threshold (kernel length times output length) below which direct
/// summation is used.
const DIRECT_WORK_LIMIT: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvMethod {
    #[default]
    Auto,
    Direct,
    Fft,
}

/// Direct "valid" convolution:
/// `out[i] = sum_k kernel[k] * signal[i + K - 1 - k]` for `i < S - K + 1`.
pub fn convolve_valid_direct(kernel: &[f64], signal: &[f64]) -> Vec<f64> {
    let k = kernel.len();
    if k == 0 || signal.len() < k {
        return Vec::new();
    }
    (0..signal.len() - k + 1)
        .map(|i| {
            let top = i + k - 1;
            kernel
                .iter()
                .enumerate()
                .map(|(j, &c)| c * signal[top - j])
                .sum()
        })
        .collect()
}

pub fn convolve_valid(kernel: &[f64], signal: &[f64], method: ConvMethod) -> Vec<f64> {
    let k = kernel.len();
    if k == 0 || signal.len() < k {
        return Vec::new();
    }
    let out_len = signal.len() - k + 1;
    let use_fft = match method {
        ConvMethod::Direct => false,
        ConvMethod::Fft => true,
        ConvMethod::Auto => k.saturating_mul(out_len) > DIRECT_WORK_LIMIT,
    };
    if use_fft {
        FftConvolver::new(kernel, signal.len()).valid(signal)
    } else {
        convolve_valid_direct(kernel, signal)
    }
}

/// A convolver with a fixed kernel and signal length; the kernel spectrum and
/// FFT plans are computed once and reused across signals.
pub struct FftConvolver {
    kernel_len: usize,
    signal_len: usize,
    fft_len: usize,
    kernel_spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftConvolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftConvolver")
            .field("kernel_len", &self.kernel_len)
            .field("signal_len", &self.signal_len)
            .field("fft_len", &self.fft_len)
            .finish()
    }
}

impl FftConvolver {
    pub fn new(kernel: &[f64], signal_len: usize) -> Self {
        assert!(!kernel.is_empty() && signal_len >= kernel.len());
        // Circular convolution of length >= signal_len leaves the valid part
        // free of wrap-around.
        let fft_len = signal_len.next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let mut kernel_spectrum = vec![Complex::new(0.0, 0.0); fft_len];
        for (slot, &c) in kernel_spectrum.iter_mut().zip(kernel) {
            slot.re = c;
        }
        forward.process(&mut kernel_spectrum);
        Self {
            kernel_len: kernel.len(),
            signal_len,
            fft_len,
            kernel_spectrum,
            forward,
            inverse,
        }
    }

    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn valid(&self, signal: &[f64]) -> Vec<f64> {
        assert_eq!(signal.len(), self.signal_len, "signal length changed");
        let mut buf = vec![Complex::new(0.0, 0.0); self.fft_len];
        for (slot, &s) in buf.iter_mut().zip(signal) {
            slot.re = s;
        }
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_spectrum) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.fft_len as f64;
        buf[self.kernel_len - 1..self.signal_len]
            .iter()
            .map(|c| c.re * scale)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn direct_small_case() {
        // out[0] = 1*3 + 2*2 + 3*1, out[1] = 1*4 + 2*3 + 3*2
        let out = convolve_valid_direct(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(out, vec![10.0, 16.0]);
    }

    #[test]
    fn short_signal_is_empty() {
        assert!(convolve_valid(&[1.0, 2.0], &[1.0], ConvMethod::Auto).is_empty());
    }

    proptest! {
        #[test]
        fn fft_matches_direct(
            kernel in prop::collection::vec(-2.0f64..2.0, 1..40),
            extra in prop::collection::vec(-2.0f64..2.0, 0..80),
        ) {
            let mut signal = extra.clone();
            signal.extend(kernel.iter().map(|v| v * 0.5));
            let a = convolve_valid_direct(&kernel, &signal);
            let b = convolve_valid(&kernel, &signal, ConvMethod::Fft);
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-11);
            }
        }
    }
}
