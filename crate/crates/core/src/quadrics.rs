//! Affine quadric hypersurfaces: normalization, the `Q^psi` and `X^phi`
//! models, and exact coordinate changes between them.

use num_traits::{One, Zero};

use crate::error::{domain, internal, precondition, Result};
use crate::field::{Scalar, Q};
use crate::forms::{witt_decompose, QuadraticForm};
use crate::linalg::{diagonalize, Matrix};

/// `xᵀ A x + b·x + c` with `A` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineQuadricPoly<F: Scalar = Q> {
    pub a: Matrix<F>,
    pub b: Vec<F>,
    pub c: F,
}

impl<F: Scalar> AffineQuadricPoly<F> {
    pub fn new(a: Matrix<F>, b: Vec<F>, c: F) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(domain!("quadratic part is not symmetric"));
        }
        if b.len() != a.rows() {
            return Err(domain!("linear part has length {} in {} variables", b.len(), a.rows()));
        }
        Ok(AffineQuadricPoly { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn zero(n: usize) -> Self {
        AffineQuadricPoly {
            a: Matrix::zeros(n, n),
            b: vec![F::zero(); n],
            c: F::zero(),
        }
    }

    /// Adds `coef * x_i * x_j` (`i == j` allowed).
    pub fn add_monomial2(&mut self, i: usize, j: usize, coef: F) {
        if i == j {
            self.a[(i, i)] = self.a[(i, i)].clone() + coef;
        } else {
            let half = coef.div(&F::from_int(2)).expect("2 != 0");
            self.a[(i, j)] = self.a[(i, j)].clone() + half.clone();
            self.a[(j, i)] = self.a[(j, i)].clone() + half;
        }
    }

    pub fn is_degree_two(&self) -> bool {
        (0..self.n()).any(|i| (0..self.n()).any(|j| !self.a[(i, j)].is_zero()))
    }

    pub fn eval(&self, x: &[F]) -> Result<F> {
        let ax = self.a.mul_vec(x)?;
        let quad = x.iter().zip(&ax).fold(F::zero(), |s, (u, v)| s + u.clone() * v.clone());
        let lin = x.iter().zip(&self.b).fold(F::zero(), |s, (u, v)| s + u.clone() * v.clone());
        Ok(quad + lin + self.c.clone())
    }

    /// `x ↦ self(M x + s)`.
    pub fn compose(&self, change: &AffineChange<F>) -> Result<Self> {
        let m = &change.matrix;
        let s = &change.shift;
        let mt = m.transpose();
        let a = m.congruence(&self.a)?;
        let as_ = self.a.mul_vec(s)?;
        let two_as_plus_b: Vec<F> = as_
            .iter()
            .zip(&self.b)
            .map(|(u, v)| F::from_int(2) * u.clone() + v.clone())
            .collect();
        let b = mt.mul_vec(&two_as_plus_b)?;
        let c = s.iter().zip(&as_).fold(F::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
            + s.iter().zip(&self.b).fold(F::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
            + self.c.clone();
        Ok(AffineQuadricPoly { a, b, c })
    }

    pub fn scale(&self, k: &F) -> Self {
        AffineQuadricPoly {
            a: self.a.map(|x| x.clone() * k.clone()),
            b: self.b.iter().map(|x| x.clone() * k.clone()).collect(),
            c: self.c.clone() * k.clone(),
        }
    }

    /// `psi(x) - 1` for a diagonal `psi` given by its coefficients.
    pub fn q_model(psi: &[F]) -> Self {
        let n = psi.len();
        let mut p = Self::zero(n);
        for (i, a) in psi.iter().enumerate() {
            p.a[(i, i)] = a.clone();
        }
        p.c = -F::one();
        p
    }

    /// `x1 x2 - phi(1, x3, ..., xn)`, `phi` diagonal of dimension `n - 1`.
    pub fn x_model(phi: &[F]) -> Self {
        let n = phi.len() + 1;
        let mut p = Self::zero(n);
        p.add_monomial2(0, 1, F::one());
        for (k, a) in phi.iter().enumerate().skip(1) {
            p.a[(k + 1, k + 1)] = -a.clone();
        }
        p.c = -phi[0].clone();
        p
    }
}

/// `y = M x + s`, stored with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChange<F: Scalar = Q> {
    pub matrix: Matrix<F>,
    pub shift: Vec<F>,
    pub inverse_matrix: Matrix<F>,
    pub inverse_shift: Vec<F>,
}

impl<F: Scalar> AffineChange<F> {
    pub fn new(matrix: Matrix<F>, shift: Vec<F>) -> Result<Self> {
        let inverse_matrix = matrix
            .inverse()
            .ok_or_else(|| domain!("coordinate change is not invertible"))?;
        let inverse_shift = inverse_matrix.mul_vec(&shift)?.into_iter().map(|x| -x).collect();
        Ok(AffineChange {
            matrix,
            shift,
            inverse_matrix,
            inverse_shift,
        })
    }

    pub fn linear(matrix: Matrix<F>) -> Result<Self> {
        let n = matrix.rows();
        Self::new(matrix, vec![F::zero(); n])
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(Matrix::identity(n)).expect("identity is invertible")
    }

    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        let mx = self.matrix.mul_vec(x)?;
        Ok(mx.into_iter().zip(&self.shift).map(|(a, b)| a + b.clone()).collect())
    }

    pub fn apply_inverse(&self, y: &[F]) -> Result<Vec<F>> {
        let my = self.inverse_matrix.mul_vec(y)?;
        Ok(my
            .into_iter()
            .zip(&self.inverse_shift)
            .map(|(a, b)| a + b.clone())
            .collect())
    }

    pub fn inverse(&self) -> Self {
        AffineChange {
            matrix: self.inverse_matrix.clone(),
            shift: self.inverse_shift.clone(),
            inverse_matrix: self.matrix.clone(),
            inverse_shift: self.shift.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.matrix.rows()) && self.shift.iter().all(|x| x.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    InputToCanonical,
    PsiToPhi,
}

/// `source(x) = scalar · target(change(x))` as polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateChange<F: Scalar = Q> {
    pub source: AffineQuadricPoly<F>,
    pub target: AffineQuadricPoly<F>,
    pub change: AffineChange<F>,
    pub scalar: F,
    pub direction: Direction,
}

impl<F: Scalar> CoordinateChange<F> {
    /// Exact check of the pushforward in both directions.
    pub fn verify(&self) -> Result<bool> {
        let forward = self.target.compose(&self.change)?.scale(&self.scalar);
        if forward != self.source {
            return Ok(false);
        }
        let inv_scalar = self.scalar.inv().ok_or_else(|| internal!("zero scalar"))?;
        let back = self.source.compose(&self.change.inverse())?.scale(&inv_scalar);
        Ok(back == self.target)
    }

    /// Point of the source mapped to the target.
    pub fn push(&self, x: &[F]) -> Result<Vec<F>> {
        self.change.apply(x)
    }

    pub fn pull(&self, y: &[F]) -> Result<Vec<F>> {
        self.change.apply_inverse(y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalForm {
    /// The hypersurface is the graph of a function: affine space of the
    /// given dimension. The change maps the input onto
    /// `sum diag_i u_i^2 + u_n`.
    FullAffineSpace {
        dim: usize,
        diag: Vec<Q>,
        change: CoordinateChange,
    },
    /// `Q^psi × A^affine_factor`; the change maps the input onto
    /// `psi(u_1..u_m) - 1` with the last `affine_factor` variables unused.
    Product {
        psi: QuadraticForm,
        affine_factor: usize,
        change: CoordinateChange,
    },
    /// A cone `sum d_i u_i^2 = 0` (times an affine factor): not smooth.
    NonSmooth {
        cone: QuadraticForm,
        affine_factor: usize,
        report: String,
    },
}

/// Diagonalize, complete squares, then read off the shape.
pub fn normalize(poly: &AffineQuadricPoly) -> Result<NormalForm> {
    if !poly.is_degree_two() {
        return Err(domain!("polynomial has degree < 2"));
    }
    let n = poly.n();
    let d = diagonalize(&poly.a)?;
    let r = d.entries.len();
    let t = &d.transform;
    // p(T y) = sum d_i y_i^2 + beta·y + c
    let beta = t.transpose().mul_vec(&poly.b)?;
    let two = Q::from_integer(2.into());
    let mut c_res = poly.c.clone();
    // z_i = y_i + beta_i / (2 d_i) for i < r
    let mut shift_y = vec![Q::zero(); n];
    for i in 0..r {
        let h = &beta[i] / (&two * &d.entries[i]);
        c_res -= &d.entries[i] * &h * &h;
        shift_y[i] = h;
    }
    let t_inv = t.inverse().ok_or_else(|| internal!("singular diagonalizing transform"))?;
    let radical: Vec<usize> = (r..n).collect();
    let lin: Vec<usize> = radical.iter().copied().filter(|&j| !beta[j].is_zero()).collect();
    if let Some(&j0) = lin.first() {
        // u = (z_0..z_{r-1}, other radical y_j, beta·y_rad + c_res)
        let mut m = Matrix::zeros(n, n);
        let mut s = vec![Q::zero(); n];
        for i in 0..r {
            m[(i, i)] = Q::one();
            s[i] = shift_y[i].clone();
        }
        let mut row = r;
        for &j in &radical {
            if j != j0 {
                m[(row, j)] = Q::one();
                row += 1;
            }
        }
        for &j in &radical {
            m[(n - 1, j)] = beta[j].clone();
        }
        s[n - 1] = c_res;
        let u_of_x = m.mul(&t_inv)?;
        let mut target = AffineQuadricPoly::zero(n);
        for i in 0..r {
            target.a[(i, i)] = d.entries[i].clone();
        }
        target.b[n - 1] = Q::one();
        let change = CoordinateChange {
            source: poly.clone(),
            target,
            change: AffineChange::new(u_of_x, s)?,
            scalar: Q::one(),
            direction: Direction::InputToCanonical,
        };
        return Ok(NormalForm::FullAffineSpace {
            dim: n - 1,
            diag: d.entries,
            change,
        });
    }
    let affine_factor = n - r;
    if c_res.is_zero() {
        return Ok(NormalForm::NonSmooth {
            cone: QuadraticForm::new(d.entries)?,
            affine_factor,
            report: "no linear term survives and the constant vanishes: the quadric is a cone, singular at its vertex".into(),
        });
    }
    // p = -c (psi(z) - 1) with psi = (-1/c) <d>
    let lambda = -c_res.clone();
    let psi_coeffs: Vec<Q> = d.entries.iter().map(|a| a / &lambda).collect();
    let psi = QuadraticForm::new(psi_coeffs.clone())?;
    let mut target = AffineQuadricPoly::zero(n);
    for (i, a) in psi_coeffs.iter().enumerate() {
        target.a[(i, i)] = a.clone();
    }
    target.c = -Q::one();
    let change = CoordinateChange {
        source: poly.clone(),
        target,
        change: AffineChange::new(t_inv, shift_y)?,
        scalar: lambda,
        direction: Direction::InputToCanonical,
    };
    Ok(NormalForm::Product {
        psi,
        affine_factor,
        change,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadricModel {
    /// `psi(x) = 1`.
    Qpsi(QuadraticForm),
    /// `x1 x2 = phi(1, x3, ..., xn)`.
    Xphi(QuadraticForm),
}

impl QuadricModel {
    pub fn dim(&self) -> usize {
        match self {
            QuadricModel::Qpsi(psi) => psi.dim(),
            QuadricModel::Xphi(phi) => phi.dim() + 1,
        }
    }

    pub fn equation<F: Scalar>(&self) -> AffineQuadricPoly<F> {
        match self {
            QuadricModel::Qpsi(psi) => {
                let c: Vec<F> = psi.coeffs().iter().map(F::from_rational).collect();
                AffineQuadricPoly::q_model(&c)
            }
            QuadricModel::Xphi(phi) => {
                let c: Vec<F> = phi.coeffs().iter().map(F::from_rational).collect();
                AffineQuadricPoly::x_model(&c)
            }
        }
    }

    pub fn eval<F: Scalar>(&self, x: &[F]) -> Result<F> {
        if x.len() != self.dim() {
            return Err(domain!("point of length {} on a model in {} variables", x.len(), self.dim()));
        }
        self.equation::<F>().eval(x)
    }
}

pub fn on_quadric<F: Scalar>(model: &QuadricModel, point: &[F]) -> Result<bool> {
    Ok(model.eval(point)?.is_zero())
}

/// `Q^psi ≅ X^phi` for isotropic `psi`: split a hyperbolic plane,
/// `psi ≅ <1,-1> ⊥ phi'`, and set `phi = <1> ⊥ (-phi')`.
pub fn to_xphi_model(psi: &QuadraticForm) -> Result<(QuadricModel, CoordinateChange)> {
    let w = witt_decompose(psi)?;
    if w.witt_index == 0 {
        return Err(precondition!("{psi} is anisotropic"));
    }
    let diag = w.split_diagonal();
    let mut phi = vec![Q::one()];
    phi.extend(diag[2..].iter().map(|a| -a));
    let phi = QuadraticForm::new(phi)?;
    let n = psi.dim();
    // y = T^{-1} x; z1 = y1 - y2, z2 = y1 + y2, z_i = y_i.
    let mut p = Matrix::identity(n);
    p[(0, 1)] = -Q::one();
    p[(1, 0)] = Q::one();
    let t_inv = w
        .transform
        .inverse()
        .ok_or_else(|| internal!("singular Witt transform"))?;
    let model = QuadricModel::Xphi(phi);
    let change = CoordinateChange {
        source: QuadricModel::Qpsi(psi.clone()).equation(),
        target: model.equation(),
        change: AffineChange::linear(p.mul(&t_inv)?)?,
        scalar: Q::one(),
        direction: Direction::PsiToPhi,
    };
    Ok((model, change))
}

/// Result of the explicit isomorphism `Q^psi_F → X^theta` over a field `F`
/// where `phi_F` represents 1.
#[derive(Debug, Clone, PartialEq)]
pub struct JfChange<F: Scalar> {
    /// `theta ≅ phi_F` with leading entry 1.
    pub theta: Vec<F>,
    pub change: CoordinateChange<F>,
}

/// For `psi = <1> ⊥ (-phi)` and `u` with `phi(u) = 1` over `F`: complete `u`
/// to an orthogonal basis, giving `theta = <1, theta'> ≅ phi_F`, then
/// `psi - 1 = (x1 - w1)(x1 + w1) - theta(1, w')` in the new coordinates.
pub fn change_coords_jf<F: Scalar>(psi: &QuadraticForm, u: &[F]) -> Result<JfChange<F>> {
    let n = psi.dim();
    if n < 2 || !psi.coeffs()[0].is_one() {
        return Err(domain!("{psi} is not of the shape <1> ⊥ -phi"));
    }
    let phi: Vec<F> = psi.coeffs()[1..].iter().map(|a| F::from_rational(&-a)).collect();
    if u.len() != n - 1 {
        return Err(domain!("witness has length {}, expected {}", u.len(), n - 1));
    }
    let val = u
        .iter()
        .zip(&phi)
        .fold(F::zero(), |s, (x, a)| s + a.clone() * x.square());
    if !val.is_one() {
        return Err(domain!("witness does not satisfy phi(u) = 1"));
    }
    let j0 = u.iter().position(|x| !x.is_zero()).expect("phi(u) = 1");
    let mut cols = vec![u.to_vec()];
    for j in (0..n - 1).filter(|&j| j != j0) {
        let mut e = vec![F::zero(); n - 1];
        e[j] = F::one();
        cols.push(e);
    }
    let basis = Matrix::from_columns(&cols)?;
    let gram = basis.congruence(&Matrix::diagonal(&phi))?;
    let d = diagonalize(&gram)?;
    if d.radical_dim != 0 || !d.entries[0].is_one() {
        return Err(internal!("completion of the witness is degenerate"));
    }
    // x' = (basis · T) w
    let full = basis.mul(&d.transform)?;
    let w_of_x = full
        .inverse()
        .ok_or_else(|| internal!("singular completion"))?;
    // z = (x1 - w1, x1 + w1, w2, ...)
    let mut m = Matrix::zeros(n, n);
    m[(0, 0)] = F::one();
    m[(1, 0)] = F::one();
    for j in 0..n - 1 {
        m[(0, j + 1)] = -w_of_x[(0, j)].clone();
        m[(1, j + 1)] = w_of_x[(0, j)].clone();
        for i in 1..n - 1 {
            m[(i + 1, j + 1)] = w_of_x[(i, j)].clone();
        }
    }
    let psi_f: Vec<F> = psi.coeffs().iter().map(F::from_rational).collect();
    let change = CoordinateChange {
        source: AffineQuadricPoly::q_model(&psi_f),
        target: AffineQuadricPoly::x_model(&d.entries),
        change: AffineChange::linear(m)?,
        scalar: F::one(),
        direction: Direction::PsiToPhi,
    };
    Ok(JfChange {
        theta: d.entries,
        change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};
    use crate::numfield::{QuadElem, QuadField};

    fn poly(n: usize, quad: &[(usize, usize, i64)], lin: &[(usize, i64)], c: i64) -> AffineQuadricPoly {
        let mut p = AffineQuadricPoly::zero(n);
        for &(i, j, k) in quad {
            p.add_monomial2(i, j, q(k));
        }
        for &(i, k) in lin {
            p.b[i] = q(k);
        }
        p.c = q(c);
        p
    }

    #[test]
    fn sphere_like_is_identity() {
        let p = poly(3, &[(0, 0, 1), (1, 1, 1), (2, 2, -1)], &[], -1);
        let NormalForm::Product { psi, affine_factor, change } = normalize(&p).unwrap() else {
            panic!()
        };
        assert_eq!(psi, QuadraticForm::from_ints(&[1, 1, -1]).unwrap());
        assert_eq!(affine_factor, 0);
        assert!(change.change.is_identity());
        assert!(change.verify().unwrap());
    }

    #[test]
    fn graph_is_affine_space() {
        let p = poly(2, &[(0, 0, 1)], &[(1, 1)], 0);
        let NormalForm::FullAffineSpace { dim, change, .. } = normalize(&p).unwrap() else {
            panic!()
        };
        assert_eq!(dim, 1);
        assert!(change.verify().unwrap());
    }

    #[test]
    fn cross_term_product() {
        let p = poly(2, &[(0, 0, 2), (0, 1, 2), (1, 1, 2)], &[], -3);
        let NormalForm::Product { psi, change, .. } = normalize(&p).unwrap() else {
            panic!()
        };
        assert_eq!(psi.dim(), 2);
        // diag <2, 3/2> scaled by 1/3
        assert_eq!(psi.coeffs(), &[qf(2, 3), qf(1, 2)]);
        assert!(change.verify().unwrap());
    }

    #[test]
    fn cone_is_reported() {
        let p = poly(3, &[(0, 0, 1), (1, 1, 1), (2, 2, -1)], &[], 0);
        assert!(matches!(normalize(&p).unwrap(), NormalForm::NonSmooth { .. }));
        assert!(normalize(&poly(2, &[], &[(0, 1)], 1)).is_err());
    }

    #[test]
    fn idempotent_on_canonical_output() {
        let p = poly(4, &[(0, 1, 3), (2, 2, 5), (0, 3, 1), (3, 3, 1)], &[(1, 2), (3, -1)], 7);
        let NormalForm::Product { change, psi, .. } = normalize(&p).unwrap() else {
            panic!()
        };
        let again = normalize(&change.target).unwrap();
        let NormalForm::Product { psi: psi2, change: ch2, .. } = again else { panic!() };
        assert_eq!(psi, psi2);
        assert!(ch2.change.is_identity());
    }

    #[test]
    fn xphi_examples() {
        let cases: [(&[i64], &[i64]); 3] = [(&[1, -1, -1], &[1, 1]), (&[1, -1], &[1]), (&[1, 1, -1], &[1, -1])];
        for (psi, phi) in cases {
            let psi = QuadraticForm::from_ints(psi).unwrap();
            let (model, change) = to_xphi_model(&psi).unwrap();
            assert!(change.verify().unwrap());
            let QuadricModel::Xphi(got) = model else { panic!() };
            assert_eq!(got.dim(), phi.len());
            // Same isometry class is enough; these small cases come out exact.
            assert_eq!(got, QuadraticForm::from_ints(phi).unwrap(), "{psi}");
        }
        assert!(to_xphi_model(&QuadraticForm::from_ints(&[1, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn on_quadric_examples() {
        let sphere = QuadricModel::Qpsi(QuadraticForm::from_ints(&[1, 1, 1]).unwrap());
        assert!(on_quadric(&sphere, &[q(1), q(0), q(0)]).unwrap());
        assert!(!on_quadric(&sphere, &[q(1), q(1), q(0)]).unwrap());
        let x = QuadricModel::Xphi(QuadraticForm::from_ints(&[1, -1]).unwrap());
        assert!(on_quadric(&x, &[q(0), q(-2), q(1)]).unwrap());
        assert!(on_quadric(&x, &[q(0), q(1)]).is_err());
    }

    #[test]
    fn jf_over_quadratic_field() {
        let k = QuadField::new(2).unwrap();
        let psi = QuadraticForm::from_ints(&[1, -2, -3]).unwrap();
        let half_root = k.elem(q(0), qf(1, 2));
        let u = vec![half_root, QuadElem::zero()];
        let jf = change_coords_jf(&psi, &u).unwrap();
        assert!(jf.change.verify().unwrap());
        assert!(jf.theta[0].is_one());
        let bad = vec![QuadElem::one(), QuadElem::zero()];
        assert!(change_coords_jf(&psi, &bad).is_err());
    }

    #[test]
    fn jf_identity_blocks() {
        let psi = QuadraticForm::from_ints(&[1, -1, -5]).unwrap();
        let jf = change_coords_jf(&psi, &[q(1), q(0)]).unwrap();
        assert!(jf.change.verify().unwrap());
        assert_eq!(jf.theta, vec![q(1), q(5)]);
    }
}
