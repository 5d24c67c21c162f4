use num_traits::Zero;

use super::{is_isotropic, isotropic_vector, QuadraticForm};
use crate::error::{internal, Result};
use crate::field::{Scalar, Q};
use crate::linalg::{diagonalize, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct WittDecomposition {
    pub witt_index: usize,
    pub kernel: Option<QuadraticForm>,
    /// Columns are a basis `e_1, f_1, ..., e_i, f_i, k_1, ...` with
    /// `q(e) = 1`, `q(f) = -1` and the kernel basis diagonal, so that
    /// `Tᵀ G T = diag(1, -1, ..., 1, -1, kernel)`.
    pub transform: Matrix<Q>,
}

impl WittDecomposition {
    pub fn split_diagonal(&self) -> Vec<Q> {
        let mut d = Vec::new();
        for _ in 0..self.witt_index {
            d.push(Q::from_integer(1.into()));
            d.push(Q::from_integer((-1).into()));
        }
        if let Some(k) = &self.kernel {
            d.extend(k.coeffs().iter().cloned());
        }
        d
    }

    /// Exact re-check of the congruence and of the kernel's anisotropy.
    pub fn verify(&self, form: &QuadraticForm) -> Result<bool> {
        let lhs = self.transform.congruence(&form.gram())?;
        if lhs != Matrix::diagonal(&self.split_diagonal()) {
            return Ok(false);
        }
        if self.transform.inverse().is_none() {
            return Ok(false);
        }
        match &self.kernel {
            Some(k) => Ok(!is_isotropic(k)?),
            None => Ok(true),
        }
    }
}

/// Splits off hyperbolic planes one isotropic vector at a time.
pub fn witt_decompose(form: &QuadraticForm) -> Result<WittDecomposition> {
    let n = form.dim();
    // Current subspace: basis columns in ambient coordinates, diagonal Gram.
    let mut basis: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::from_integer(1.into());
            e
        })
        .collect();
    let mut diag: Vec<Q> = form.coeffs().to_vec();
    let mut split: Vec<Vec<Q>> = Vec::new();
    let mut index = 0;
    loop {
        if diag.is_empty() {
            break;
        }
        let sub = QuadraticForm::new(diag.clone())?;
        let Some(v) = isotropic_vector(&sub)? else {
            break;
        };
        let (e, f, rest) = hyperbolic_pair(&sub, &v)?;
        let to_ambient = |x: &[Q]| -> Vec<Q> {
            (0..n)
                .map(|r| {
                    basis
                        .iter()
                        .zip(x)
                        .fold(Q::zero(), |acc, (b, xi)| acc + &b[r] * xi)
                })
                .collect()
        };
        split.push(to_ambient(&e));
        split.push(to_ambient(&f));
        index += 1;
        let new_basis: Vec<Vec<Q>> = rest.0.iter().map(|w| to_ambient(w)).collect();
        basis = new_basis;
        diag = rest.1;
    }
    // Normalize kernel entries to squarefree integers.
    let kernel = if diag.is_empty() {
        None
    } else {
        let (reduced, scale) = QuadraticForm::new(diag)?.square_reduced()?;
        for (b, s) in basis.iter_mut().zip(&scale) {
            for x in b.iter_mut() {
                *x = &*x * s;
            }
        }
        Some(reduced)
    };
    split.extend(basis);
    let transform = Matrix::from_columns(&split)?;
    let out = WittDecomposition {
        witt_index: index,
        kernel,
        transform,
    };
    debug_assert!(out.verify(form).unwrap_or(false));
    Ok(out)
}

type Complement = (Vec<Vec<Q>>, Vec<Q>);

/// For an isotropic `v` of the diagonal form `sub`, returns `e, f` with
/// `q(e) = 1`, `q(f) = -1`, `B(e, f) = 0` spanning a hyperbolic plane through
/// `v`, and a diagonal basis of its orthogonal complement.
pub(crate) fn hyperbolic_pair(
    sub: &QuadraticForm,
    v: &[Q],
) -> Result<(Vec<Q>, Vec<Q>, Complement)> {
    let u = isotropic_partner(sub, v)?;
    let e: Vec<Q> = v.iter().zip(&u).map(|(a, b)| a + b).collect();
    let f: Vec<Q> = v.iter().zip(&u).map(|(a, b)| a - b).collect();
    let m = sub.dim();
    let c = sub.coeffs();
    let rows = vec![
        (0..m).map(|i| &c[i] * &v[i]).collect::<Vec<Q>>(),
        (0..m).map(|i| &c[i] * &u[i]).collect::<Vec<Q>>(),
    ];
    let perp = Matrix::from_rows(rows)?.nullspace();
    if perp.is_empty() {
        return Ok((e, f, (Vec::new(), Vec::new())));
    }
    let w = Matrix::from_columns(&perp)?;
    let gram = w.congruence(&sub.gram())?;
    let d = diagonalize(&gram)?;
    if d.radical_dim != 0 {
        return Err(internal!("orthogonal complement of a hyperbolic plane is degenerate"));
    }
    let new_basis = w.mul(&d.transform)?;
    let cols: Vec<Vec<Q>> = (0..new_basis.cols()).map(|j| new_basis.column(j)).collect();
    Ok((e, f, (cols, d.entries)))
}

/// `u` with `q(u) = 0` and `B(v, u) = 1/2`, for isotropic nonzero `v`.
pub(crate) fn isotropic_partner<F: Scalar>(sub: &QuadraticForm, v: &[F]) -> Result<Vec<F>> {
    let m = sub.dim();
    let j = (0..m)
        .find(|&j| !v[j].is_zero())
        .ok_or_else(|| internal!("zero isotropic vector"))?;
    let mut y = vec![F::zero(); m];
    y[j] = F::one();
    let bvy = sub.polar(v, &y);
    let qy = sub.eval(&y)?;
    let two = F::from_int(2);
    let coef = qy.div(&(two.clone() * bvy.clone())).expect("B(v, y) != 0");
    // u = (y - coef v) / (2 B(v, y))
    let scale = (two * bvy).inv().expect("nonzero");
    Ok((0..m)
        .map(|i| (y[i].clone() - coef.clone() * v[i].clone()) * scale.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};

    fn f(c: &[i64]) -> QuadraticForm {
        QuadraticForm::from_ints(c).unwrap()
    }

    fn decomp(form: &QuadraticForm) -> WittDecomposition {
        let w = witt_decompose(form).unwrap();
        assert!(w.verify(form).unwrap(), "{form}");
        w
    }

    #[test]
    fn examples() {
        let w = decomp(&f(&[1, -1, 1, -1]));
        assert_eq!((w.witt_index, w.kernel), (2, None));
        let w = decomp(&f(&[1, 1, 1]));
        assert_eq!((w.witt_index, w.kernel), (0, Some(f(&[1, 1, 1]))));
        let w = decomp(&f(&[1, 1, -1]));
        assert_eq!(w.witt_index, 1);
        assert_eq!(w.kernel.unwrap().dim(), 1);
    }

    #[test]
    fn partner_is_isotropic_and_paired() {
        let form = f(&[3, -3, 5]);
        let v = vec![q(1), q(1), q(0)];
        let u = isotropic_partner(&form, &v).unwrap();
        assert_eq!(form.eval(&u).unwrap(), q(0));
        assert_eq!(form.polar(&v, &u), qf(1, 2));
    }

    #[test]
    fn padding_adds_one() {
        let corpus: [&[i64]; 8] = [
            &[1, 1, 1],
            &[1, -2, -3],
            &[2, 3, 5, -30],
            &[1, 1, -1],
            &[1, 2, 3, 5],
            &[1, -1, 2, -2, 3],
            &[-1, -1, -1, -1, 7],
            &[2, -5],
        ];
        for c in corpus {
            let form = f(c);
            let a = decomp(&form).witt_index;
            let padded = form.perp(&QuadraticForm::hyperbolic_plane());
            assert_eq!(decomp(&padded).witt_index, a + 1, "{form}");
        }
    }
}
