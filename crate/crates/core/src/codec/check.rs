//! Check-node updates.
//!
//! A check with edge values `t_e` and addition factors `h_e` enforces
//! `⊕_e (t_e ⊕ h_e) = ψ₀`. The message to edge `m` is
//! `l_m[k] = Pr[⊕_{e≠m}(t_e ⊕ h_e) = ⊖(k ⊕ h_m)]`, a group convolution of the
//! shifted incoming messages. [`cn_update_direct`] sums over configurations;
//! [`cn_update_dft`] diagonalizes the convolution with the DFT over `𝔽_p^M`.

use num_complex::Complex;

use super::message::{normalize_in_place, ProbVec};
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;
use crate::scalar::Real;

/// Largest check degree accepted by [`cn_update_direct`].
pub const MAX_DIRECT_DEGREE: usize = 6;

/// Exhaustive evaluation of the check-to-variable message on `target`.
/// `incoming[target]` is ignored.
pub fn cn_update_direct<T: Real>(
    incoming: &[ProbVec<T>],
    h: &[usize],
    target: usize,
    table: &PartitionTable,
) -> Result<ProbVec<T>> {
    check_args(incoming, h, target, table)?;
    let deg = incoming.len();
    if deg > MAX_DIRECT_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: deg,
            max: MAX_DIRECT_DEGREE,
        });
    }
    let q = table.size();
    let others: Vec<usize> = (0..deg).filter(|&e| e != target).collect();
    let mut out = vec![T::zero(); q];
    let mut digits = vec![0usize; others.len()];
    loop {
        let mut sum = 0usize;
        let mut weight = T::one();
        for (d, &e) in digits.iter().zip(&others) {
            sum = table.add_idx(sum, table.add_idx(*d, h[e]));
            weight *= incoming[e].as_slice()[*d];
        }
        let k = table.neg_idx(table.add_idx(sum, h[target]));
        out[k] += weight;
        // odometer over q^{deg−1} configurations
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                normalize_in_place(&mut out);
                return Ok(ProbVec::from_weights(out));
            }
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// DFT evaluation of the same message.
pub fn cn_update_dft<T: Real>(
    incoming: &[ProbVec<T>],
    h: &[usize],
    target: usize,
    table: &PartitionTable,
) -> Result<ProbVec<T>> {
    check_args(incoming, h, target, table)?;
    let kernel = CheckKernel::<T>::new(table);
    let inputs: Vec<&[T]> = incoming.iter().map(|p| p.as_slice()).collect();
    let mut outputs = vec![vec![T::zero(); table.size()]; incoming.len()];
    kernel.update(&inputs, h, 0, &mut outputs, &mut kernel.workspace(incoming.len()));
    Ok(ProbVec::from_weights(outputs.swap_remove(target)))
}

fn check_args<T: Real>(incoming: &[ProbVec<T>], h: &[usize], target: usize, table: &PartitionTable) -> Result<()> {
    if incoming.len() != h.len() {
        return Err(Error::LengthMismatch {
            expected: incoming.len(),
            found: h.len(),
        });
    }
    if target >= incoming.len() {
        return Err(Error::InvalidInput(format!("target edge {target} out of range")));
    }
    let q = table.size();
    if let Some(p) = incoming.iter().find(|p| p.len() != q) {
        return Err(Error::LengthMismatch {
            expected: q,
            found: p.len(),
        });
    }
    if h.iter().any(|&v| v >= q) {
        return Err(Error::InvalidInput("addition factor outside the partition".into()));
    }
    Ok(())
}

/// Separable DFT over `ℤ_p^M` in the flat coordinates of the φ map.
#[derive(Clone, Debug)]
pub struct GroupDft<T: Real> {
    p: usize,
    m: usize,
    q: usize,
    /// `e^{−2πi·r/p}` for `r = 0..p`
    roots: Vec<Complex<T>>,
}

impl<T: Real> GroupDft<T> {
    pub fn new(table: &PartitionTable) -> Self {
        let p = table.p();
        let roots = (0..p)
            .map(|r| {
                let ang = -T::lit(2.0 * std::f64::consts::PI * r as f64 / p as f64);
                Complex::new(ang.cos(), ang.sin())
            })
            .collect();
        Self {
            p,
            m: table.m(),
            q: table.size(),
            roots,
        }
    }

    /// In-place forward transform of a flat-indexed array.
    pub fn forward(&self, x: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.transform(x, scratch, false);
    }

    /// In-place inverse transform, including the `1/q` factor.
    pub fn inverse(&self, x: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.transform(x, scratch, true);
        let s = T::one() / T::lit(self.q as f64);
        for v in x.iter_mut() {
            *v = v.scale(s);
        }
    }

    fn transform(&self, x: &mut [Complex<T>], scratch: &mut [Complex<T>], inverse: bool) {
        let p = self.p;
        let mut stride = 1;
        for _ in 0..self.m {
            for base in 0..self.q {
                if (base / stride) % p != 0 {
                    continue;
                }
                for (a, out) in scratch.iter_mut().take(p).enumerate() {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for b in 0..p {
                        let r = (a * b) % p;
                        let w = if inverse { self.roots[r].conj() } else { self.roots[r] };
                        acc = acc + x[base + b * stride] * w;
                    }
                    *out = acc;
                }
                for a in 0..p {
                    x[base + a * stride] = scratch[a];
                }
            }
            stride *= p;
        }
    }
}

/// Reusable buffers for [`CheckKernel::update`].
pub struct CheckWorkspace<T: Real> {
    spectra: Vec<Vec<Complex<T>>>,
    prefix: Vec<Vec<Complex<T>>>,
    buf: Vec<Complex<T>>,
    tmp: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

/// All-edges check update through the DFT, with leave-one-out products.
#[derive(Clone, Debug)]
pub struct CheckKernel<T: Real> {
    dft: GroupDft<T>,
    q: usize,
    /// `gather[h][f]` = leader `φ(f) ⊖ h`
    gather: Vec<Vec<u32>>,
    /// `scatter[h][k]` = flat index of `⊖(k ⊕ h)`
    scatter: Vec<Vec<u32>>,
    /// spectrum of the point mass at each leader
    point_spectra: Vec<Vec<Complex<T>>>,
}

impl<T: Real> CheckKernel<T> {
    pub fn new(table: &PartitionTable) -> Self {
        let q = table.size();
        let dft = GroupDft::new(table);
        let gather = (0..q)
            .map(|h| (0..q).map(|f| table.sub_idx(table.phi(f), h) as u32).collect())
            .collect();
        let scatter = (0..q)
            .map(|h| {
                (0..q)
                    .map(|k| table.phi_inverse(table.neg_idx(table.add_idx(k, h))) as u32)
                    .collect()
            })
            .collect();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); table.p()];
        let point_spectra = (0..q)
            .map(|c| {
                let mut v = vec![Complex::new(T::zero(), T::zero()); q];
                v[table.phi_inverse(c)] = Complex::new(T::one(), T::zero());
                dft.forward(&mut v, &mut scratch);
                v
            })
            .collect();
        Self {
            dft,
            q,
            gather,
            scatter,
            point_spectra,
        }
    }

    pub fn workspace(&self, max_degree: usize) -> CheckWorkspace<T> {
        let zero = Complex::new(T::zero(), T::zero());
        CheckWorkspace {
            spectra: vec![vec![zero; self.q]; max_degree],
            prefix: vec![vec![zero; self.q]; max_degree + 1],
            buf: vec![zero; self.q],
            tmp: vec![zero; self.q],
            scratch: vec![zero; self.dft.p],
        }
    }

    /// Writes the message for every edge into `outputs`.
    ///
    /// `constant` is an extra known term `c` in the constraint
    /// `⊕(t_e ⊕ h_e) ⊕ c = ψ₀`; pass 0 when absent.
    pub fn update<O: AsMut<[T]>>(
        &self,
        inputs: &[&[T]],
        h: &[usize],
        constant: usize,
        outputs: &mut [O],
        ws: &mut CheckWorkspace<T>,
    ) {
        let deg = inputs.len();
        if ws.spectra.len() < deg {
            *ws = self.workspace(deg);
        }
        for (e, input) in inputs.iter().enumerate() {
            let spec = &mut ws.spectra[e];
            for (f, &src) in self.gather[h[e]].iter().enumerate() {
                spec[f] = Complex::new(input[src as usize], T::zero());
            }
            self.dft.forward(spec, &mut ws.scratch);
        }
        // prefix[e] = constant · Π_{i<e} spectra[i]
        ws.prefix[0].copy_from_slice(&self.point_spectra[constant]);
        for e in 0..deg {
            let (head, tail) = ws.prefix.split_at_mut(e + 1);
            for ((dst, a), b) in tail[0].iter_mut().zip(&head[e]).zip(&ws.spectra[e]) {
                *dst = *a * *b;
            }
        }
        // walk backwards keeping the suffix product in buf
        for v in ws.buf.iter_mut() {
            *v = Complex::new(T::one(), T::zero());
        }
        for e in (0..deg).rev() {
            let tmp = &mut ws.tmp;
            for ((t, a), b) in tmp.iter_mut().zip(&ws.prefix[e]).zip(&ws.buf) {
                *t = *a * *b;
            }
            self.dft.inverse(tmp, &mut ws.scratch);
            let out = outputs[e].as_mut();
            for (k, &f) in self.scatter[h[e]].iter().enumerate() {
                out[k] = tmp[f as usize].re.max(T::zero());
            }
            normalize_in_place(out);
            for (s, b) in ws.buf.iter_mut().zip(&ws.spectra[e]) {
                *s = *s * *b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_prob(rng: &mut impl Rng, q: usize) -> ProbVec<f64> {
        ProbVec::from_weights((0..q).map(|_| rng.random::<f64>().powi(3)).collect())
    }

    #[test]
    fn uniform_in_uniform_out() {
        let t = PartitionTable::hurwitz_1_2i();
        let u = ProbVec::<f64>::uniform(25);
        let inc = vec![u.clone(), u.clone(), u.clone()];
        for out in [
            cn_update_direct(&inc, &[3, 7, 9], 1, &t).unwrap(),
            cn_update_dft(&inc, &[3, 7, 9], 1, &t).unwrap(),
        ] {
            for &v in out.as_slice() {
                assert!((v - 0.04).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn point_masses_solve_the_constraint() {
        let t = PartitionTable::hurwitz_1_2i();
        let (a, b) = (4, 17);
        let inc = vec![
            ProbVec::<f64>::point_mass(25, a),
            ProbVec::point_mass(25, b),
            ProbVec::uniform(25),
        ];
        let out = cn_update_direct(&inc, &[0, 0, 0], 2, &t).unwrap();
        // a ⊕ b ⊕ k = 0
        assert_eq!(out.argmax(), t.neg_idx(t.add_idx(a, b)));
        assert!((out.as_slice()[out.argmax()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_two_is_a_permutation() {
        let t = PartitionTable::hurwitz_1_2i();
        let mut rng = crate::rng::stream(3, 0);
        let r = random_prob(&mut rng, 25);
        let inc = vec![r.clone(), ProbVec::uniform(25)];
        let out = cn_update_dft(&inc, &[0, 0], 1, &t).unwrap();
        for k in 0..25 {
            assert!((out.as_slice()[k] - r.as_slice()[t.neg_idx(k)]).abs() < 1e-12);
        }
    }

    #[test]
    fn dft_matches_direct() {
        let mut rng = crate::rng::stream(4, 0);
        for t in [PartitionTable::hurwitz_1_2i(), PartitionTable::gaussian_1_2i()] {
            let q = t.size();
            for deg in 2..=4 {
                let inc: Vec<ProbVec<f64>> = (0..deg).map(|_| random_prob(&mut rng, q)).collect();
                let h: Vec<usize> = (0..deg).map(|_| rng.random_range(0..q)).collect();
                for target in 0..deg {
                    let a = cn_update_direct(&inc, &h, target, &t).unwrap();
                    let b = cn_update_dft(&inc, &h, target, &t).unwrap();
                    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                        assert!((x - y).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn direct_rejects_large_degree() {
        let t = PartitionTable::gaussian_1_2i();
        let inc = vec![ProbVec::<f64>::uniform(5); 7];
        assert!(matches!(
            cn_update_direct(&inc, &[0; 7], 0, &t),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn constant_term_shifts_the_output() {
        let t = PartitionTable::hurwitz_1_2i();
        let kernel = CheckKernel::<f64>::new(&t);
        let a = ProbVec::<f64>::point_mass(25, 6);
        let u = ProbVec::<f64>::uniform(25);
        let mut out = vec![vec![0.0; 25]; 2];
        kernel.update(&[a.as_slice(), u.as_slice()], &[0, 0], 11, &mut out, &mut kernel.workspace(2));
        // 6 ⊕ k ⊕ 11 = 0
        assert_eq!(super::super::message::argmax(&out[1]), t.neg_idx(t.add_idx(6, 11)));
    }

    #[test]
    fn single_precision_kernel() {
        let t = PartitionTable::hurwitz_1_2i();
        let mut rng = crate::rng::stream(5, 0);
        let inc64: Vec<ProbVec<f64>> = (0..3).map(|_| random_prob(&mut rng, 25)).collect();
        let inc32: Vec<ProbVec<f32>> = inc64
            .iter()
            .map(|p| ProbVec::from_weights(p.as_slice().iter().map(|&v| v as f32).collect()))
            .collect();
        let a = cn_update_dft(&inc64, &[1, 2, 3], 0, &t).unwrap();
        let b = cn_update_dft(&inc32, &[1, 2, 3], 0, &t).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - *y as f64).abs() < 1e-5);
        }
    }
}
