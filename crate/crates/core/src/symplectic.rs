//! Even supersymplectic free modules and their maximal isotropic subspaces.
//!
//! A vector is a column of coordinates `x_i` on the right of the basis,
//! `v = sum_i b_i x_i`. The pairing is
//! `<v, w> = sum_ij x'_i G_ij y_j` where `G_ij = <b_i, b_j>` and `x'_i` is
//! `x_i` for even `b_i` and its parity involution for odd `b_i` (moving `x_i`
//! across `b_i`). It is left linear in `v` and right linear in `w`.
//! Subspaces are given by generator columns, even generators first.

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElt, Parity};
use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::supermatrix::{ber, grassmann_inverse, independent_rows, Dims, SuperMatrix};

type GM<R> = Matrix<GrassmannElt<R>>;

#[derive(Clone, PartialEq, Debug)]
pub struct SympSpace<R> {
    dims: Dims,
    gram: GM<R>,
}

impl<R: Field> SympSpace<R> {
    /// Validates parity, super-skew-symmetry `G_ij = -(-1)^{p_i p_j} G_ji`
    /// and invertibility of the reduced form.
    pub fn new(dims: Dims, gram: GM<R>) -> Result<Self> {
        let sm = SuperMatrix::new(dims, dims, gram)?;
        let gram = sm.entries().clone();
        let n = dims.total();
        for i in 0..n {
            for j in 0..n {
                let both_odd = dims.parity(i).is_odd() && dims.parity(j).is_odd();
                let expect = if both_odd { gram.get(j, i).clone() } else { -gram.get(j, i).clone() };
                if *gram.get(i, j) != expect {
                    return Err(Error::InvalidInput(format!("form is not super-skew at ({i}, {j})")));
                }
            }
        }
        if sm.reduction().try_inverse().is_err() {
            return Err(Error::NotInvertible);
        }
        Ok(SympSpace { dims, gram })
    }

    /// Basis `e_1..e_m, f_1..f_m | eps_1..eps_n, eps'_1..eps'_n` with
    /// `<e_i, f_i> = 1 = -<f_i, e_i>` and `<eps_i, eps'_i> = <eps'_i, eps_i> = 1`.
    pub fn darboux(m: usize, n: usize) -> Self {
        let dims = Dims::new(2 * m, 2 * n);
        let mut gram: GM<R> = Matrix::zeros(dims.total(), dims.total());
        let one = GrassmannElt::scalar(R::one());
        for i in 0..m {
            gram.set(i, m + i, one.clone());
            gram.set(m + i, i, -one.clone());
        }
        for i in 0..n {
            let (a, b) = (2 * m + i, 2 * m + n + i);
            gram.set(a, b, one.clone());
            gram.set(b, a, one.clone());
        }
        SympSpace { dims, gram }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn gram(&self) -> &GM<R> {
        &self.gram
    }

    /// Lagrangian rank `(m|n)`.
    pub fn half_dims(&self) -> Dims {
        Dims::new(self.dims.even / 2, self.dims.odd / 2)
    }

    /// Matrix of `<u_a, w_b>` over the columns of `u` and `w`.
    pub fn pairing(&self, u: &GM<R>, w: &GM<R>) -> GM<R> {
        let mut twisted = u.clone();
        for i in self.dims.even..self.dims.total() {
            for a in 0..u.cols() {
                twisted.set(i, a, u.get(i, a).involution());
            }
        }
        &(&twisted.transpose() * &self.gram) * w
    }

    /// Pairing of two generator sets as a supermatrix.
    pub fn pairing_super(&self, u: &SuperMatrix<R>, w: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
        SuperMatrix::new(u.col_dims(), w.col_dims(), self.pairing(u.entries(), w.entries()))
    }

    pub fn basis(&self) -> SuperMatrix<R> {
        SuperMatrix::identity(self.dims)
    }

    /// `V ⊕ W` with the block-diagonal form; even parts of both come first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let dims = Dims::new(self.dims.even + other.dims.even, self.dims.odd + other.dims.odd);
        let place = embed_positions(self.dims, other.dims);
        let mut gram: GM<R> = Matrix::zeros(dims.total(), dims.total());
        for (i, &pi) in place.0.iter().enumerate() {
            for (j, &pj) in place.0.iter().enumerate() {
                gram.set(pi, pj, self.gram.get(i, j).clone());
            }
        }
        for (i, &pi) in place.1.iter().enumerate() {
            for (j, &pj) in place.1.iter().enumerate() {
                gram.set(pi, pj, other.gram.get(i, j).clone());
            }
        }
        SympSpace { dims, gram }
    }
}

// Positions of the basis vectors of `a` and `b` inside `a ⊕ b`.
fn embed_positions(a: Dims, b: Dims) -> (Vec<usize>, Vec<usize>) {
    let even = a.even + b.even;
    let pa = (0..a.total()).map(|i| if i < a.even { i } else { even + (i - a.even) }).collect();
    let pb = (0..b.total())
        .map(|i| if i < b.even { a.even + i } else { even + a.odd + (i - b.even) })
        .collect();
    (pa, pb)
}

/// A free submodule spanned by generator columns; intended to be isotropic.
#[derive(Clone, PartialEq, Debug)]
pub struct IsotropicSub<R> {
    space: SympSpace<R>,
    gens: SuperMatrix<R>,
}

impl<R: Field> IsotropicSub<R> {
    /// Requires the generators to be independent modulo nilpotents. Isotropy
    /// is reported by [`IsotropicSub::is_isotropic`], not enforced.
    pub fn new(space: &SympSpace<R>, gens: SuperMatrix<R>) -> Result<Self> {
        if gens.row_dims() != space.dims() {
            return Err(Error::ShapeMismatch("generators do not live in the space".into()));
        }
        if gens.reduction().rank() != gens.col_dims().total() {
            return Err(Error::InvalidInput("generators are dependent modulo nilpotents".into()));
        }
        Ok(IsotropicSub { space: space.clone(), gens })
    }

    /// Span of the listed standard basis vectors (indices in the ambient basis).
    pub fn coordinate(space: &SympSpace<R>, indices: &[usize]) -> Result<Self> {
        let dims = space.dims();
        let mut idx = indices.to_vec();
        idx.sort_by_key(|&i| (dims.parity(i).is_odd(), i));
        let even = idx.iter().filter(|&&i| i < dims.even).count();
        let m = Matrix::from_fn(dims.total(), idx.len(), |i, j| {
            if idx[j] == i {
                GrassmannElt::scalar(R::one())
            } else {
                GrassmannElt::scalar(R::zero())
            }
        });
        IsotropicSub::new(space, SuperMatrix::new(dims, Dims::new(even, idx.len() - even), m)?)
    }

    pub fn space(&self) -> &SympSpace<R> {
        &self.space
    }

    pub fn gens(&self) -> &SuperMatrix<R> {
        &self.gens
    }

    pub fn dims(&self) -> Dims {
        self.gens.col_dims()
    }

    pub fn is_isotropic(&self) -> bool {
        self.space.pairing(self.gens.entries(), self.gens.entries()).is_zero()
    }

    /// Isotropic of rank `(m|n)` in a space of rank `(2m|2n)`; with an
    /// invertible form and independent generators this forces `V/L ≅ L^∨`.
    pub fn is_maximal_isotropic(&self) -> bool {
        self.is_isotropic() && self.dims() == self.space.half_dims()
    }

    /// Same span, with the change of basis `gens * g`.
    pub fn rebase(&self, g: &SuperMatrix<R>) -> Result<Self> {
        IsotropicSub::new(&self.space, self.gens.try_mul(g)?)
    }

    /// Coefficients `c` with `gens * c = v`, if `v` lies in the span.
    pub fn coordinates_of(&self, v: &SuperMatrix<R>) -> Option<SuperMatrix<R>> {
        solve_in_span(&self.gens, v)
    }

    pub fn contains(&self, other: &IsotropicSub<R>) -> bool {
        self.coordinates_of(&other.gens).is_some()
    }

    pub fn same_span(&self, other: &IsotropicSub<R>) -> bool {
        self.dims() == other.dims() && self.contains(other) && other.contains(self)
    }

    /// Dimensions of `L ∩ L'` modulo nilpotents, via the kernel of the reduced pairing.
    pub fn intersection_dims(&self, other: &IsotropicSub<R>) -> Dims {
        let p = self.space.pairing(self.gens.entries(), other.gens.entries()).map(|x| x.constant_term());
        let (r, s) = (self.dims(), other.dims());
        let even_rows: Vec<usize> = (0..r.even).collect();
        let odd_rows: Vec<usize> = (r.even..r.total()).collect();
        let even_cols: Vec<usize> = (0..s.even).collect();
        let odd_cols: Vec<usize> = (s.even..s.total()).collect();
        let a = p.submatrix(&even_rows, &even_cols);
        let d = p.submatrix(&odd_rows, &odd_cols);
        Dims::new(r.even - a.rank(), r.odd - d.rank())
    }
}

/// `c` with `basis * c = v`, using pivot rows that are independent modulo nilpotents.
pub fn solve_in_span<R: Field>(basis: &SuperMatrix<R>, v: &SuperMatrix<R>) -> Option<SuperMatrix<R>> {
    let rows = independent_rows(&basis.reduction());
    if rows.len() != basis.col_dims().total() {
        return None;
    }
    let square = basis.entries().select_rows(&rows);
    let inv = grassmann_inverse(&square).ok()?;
    let c = &inv * &v.entries().select_rows(&rows);
    if &(basis.entries() * &c) != v.entries() {
        return None;
    }
    SuperMatrix::new(basis.col_dims(), v.col_dims(), c).ok()
}

/// Basis of `{w : r w = 0}` where `r` has rows independent modulo nilpotents.
/// `col_dims` grades the unknowns; free unknowns give the basis vectors.
fn kernel_basis<R: Field>(r: &GM<R>, col_dims: Dims) -> Result<SuperMatrix<R>> {
    let reduced = r.map(|x| x.constant_term());
    let (_, pivots) = reduced.rref();
    if pivots.len() != r.rows() {
        return Err(Error::SurjectivityFail);
    }
    let free: Vec<usize> = (0..r.cols()).filter(|c| !pivots.contains(c)).collect();
    let all_rows: Vec<usize> = (0..r.rows()).collect();
    let rp_inv = grassmann_inverse(&r.submatrix(&all_rows, &pivots))?;
    let rf = r.submatrix(&all_rows, &free);
    let solved = -(&rp_inv * &rf);
    let mut out: GM<R> = Matrix::zeros(r.cols(), free.len());
    for (k, &f) in free.iter().enumerate() {
        out.set(f, k, GrassmannElt::scalar(R::one()));
        for (row, &p) in pivots.iter().enumerate() {
            out.set(p, k, solved.get(row, k).clone());
        }
    }
    let even = free.iter().filter(|&&f| col_dims.parity(f) == Parity::Even).count();
    SuperMatrix::new(col_dims, Dims::new(even, free.len() - even), out)
}

/// Columns of `m` picked by index, keeping the even-first layout.
fn pick_columns<R: Field>(m: &SuperMatrix<R>, cols: &[usize]) -> Result<SuperMatrix<R>> {
    let mut cols = cols.to_vec();
    cols.sort_by_key(|&c| (m.col_dims().parity(c).is_odd(), c));
    let even = cols.iter().filter(|&&c| c < m.col_dims().even).count();
    SuperMatrix::new(m.row_dims(), Dims::new(even, cols.len() - even), m.entries().select_cols(&cols))
}

/// Concatenates generator sets, even columns of both first.
pub fn join_columns<R: Field>(a: &SuperMatrix<R>, b: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    if a.row_dims() != b.row_dims() {
        return Err(Error::ShapeMismatch("joined generators live in different spaces".into()));
    }
    let (da, db) = (a.col_dims(), b.col_dims());
    let cols = da.total() + db.total();
    let entries = Matrix::from_fn(a.row_dims().total(), cols, |i, j| {
        if j < da.even {
            a.get(i, j).clone()
        } else if j < da.even + db.even {
            b.get(i, j - da.even).clone()
        } else if j < da.even + db.even + da.odd {
            a.get(i, da.even + (j - da.even - db.even)).clone()
        } else {
            b.get(i, db.even + (j - da.even - db.even - da.odd)).clone()
        }
    });
    SuperMatrix::new(a.row_dims(), Dims::new(da.even + db.even, da.odd + db.odd), entries)
}

/// `θ(L1, L2)`: the Berezinian of the pairing matrix in the given bases.
pub fn theta_section<R: Field>(l1: &IsotropicSub<R>, l2: &IsotropicSub<R>) -> Result<GrassmannElt<R>> {
    let p = l1.space.pairing_super(&l1.gens, &l2.gens)?;
    if p.row_dims() != p.col_dims() || p.reduction().try_inverse().is_err() {
        return Err(Error::NotTransversal);
    }
    ber(&p)
}

/// Output of [`reduce_by_isotropic`].
#[derive(Clone, Debug)]
pub struct Reduction<R> {
    /// `M^⊥ / M`, with basis the complement `w` below.
    pub space: SympSpace<R>,
    pub l1: IsotropicSub<R>,
    pub l2: IsotropicSub<R>,
    /// Lifts of the `V̄` basis vectors to `V`.
    pub complement: SuperMatrix<R>,
    /// Basis of `L1` whose first part lifts `L̄1` and whose remainder is `M`.
    pub l1_adapted: IsotropicSub<R>,
    /// Basis of `L2` whose first part spans `L2 ∩ M^⊥` and whose
    /// remainder `n` satisfies `<m_i, n_j> = δ_ij`.
    pub l2_adapted: IsotropicSub<R>,
}

/// Isotropic reduction of a Lagrangian pair by `M ⊆ L1`.
pub fn reduce_by_isotropic<R: Field>(
    l1: &IsotropicSub<R>,
    l2: &IsotropicSub<R>,
    m: &IsotropicSub<R>,
) -> Result<Reduction<R>> {
    let v = l1.space();
    if !l1.contains(m) {
        return Err(Error::NotContained);
    }
    // L2 -> M^∨ must be onto
    let q = v.pairing(m.gens.entries(), l2.gens.entries());
    let k = kernel_basis(&q, l2.dims())?;
    let l2_cap = l2.gens.try_mul(&k)?;

    // M^⊥ and a complement of M inside it
    let r = v.pairing(m.gens.entries(), &Matrix::identity(v.dims().total()));
    let perp = kernel_basis(&r, v.dims()).map_err(|_| Error::InvalidInput("dependent M".into()))?;
    let m_in_perp = solve_in_span(&perp, &m.gens).ok_or(Error::NotIsotropic)?;
    let used = independent_rows(&m_in_perp.reduction());
    let rest: Vec<usize> = (0..perp.col_dims().total()).filter(|i| !used.contains(i)).collect();
    let w = pick_columns(&perp, &rest)?;
    let w_dims = w.col_dims();
    let space = SympSpace::new(w_dims, v.pairing(w.entries(), w.entries()))?;
    let full = join_columns(&w, &m.gens)?;

    // coordinates in (w, m) and projection onto w
    let project = |gens: &SuperMatrix<R>| -> Result<SuperMatrix<R>> {
        let c = solve_in_span(&full, gens).ok_or(Error::NotContained)?;
        let rows: Vec<usize> = complement_rows(w_dims, m.dims());
        SuperMatrix::new(w_dims, gens.col_dims(), c.entries().select_rows(&rows))
    };

    // L̄1: images of L1 generators independent modulo M
    let l1_proj = project(&l1.gens)?;
    let lifted = l1_proj.reduction().rref().1;
    let l1c = pick_columns(&l1.gens, &lifted)?;
    let l1bar = IsotropicSub::new(&space, pick_columns(&l1_proj, &lifted)?)?;
    let l2bar = IsotropicSub::new(&space, project(&l2_cap)?)?;

    // n ⊆ L2 dual to m
    let q_red = q.map(|x| x.constant_term());
    let piv = q_red.rref().1;
    let all_rows: Vec<usize> = (0..q.rows()).collect();
    let q_inv = grassmann_inverse(&q.submatrix(&all_rows, &piv))?;
    let mut sel: GM<R> = Matrix::zeros(l2.dims().total(), piv.len());
    for (j, &p) in piv.iter().enumerate() {
        sel.set(p, j, GrassmannElt::scalar(R::one()));
    }
    let n_gens = SuperMatrix::new(v.dims(), m.dims(), &(l2.gens.entries() * &sel) * &q_inv)?;

    Ok(Reduction {
        l1_adapted: IsotropicSub::new(v, join_columns(&l1c, &m.gens)?)?,
        l2_adapted: IsotropicSub::new(v, join_columns(&l2_cap, &n_gens)?)?,
        space,
        l1: l1bar,
        l2: l2bar,
        complement: w,
    })
}

// Row indices of the `w` coordinates inside the joined `(w, m)` layout.
fn complement_rows(w: Dims, m: Dims) -> Vec<usize> {
    let mut rows: Vec<usize> = (0..w.even).collect();
    rows.extend((0..w.odd).map(|i| w.even + m.even + i));
    rows
}

/// Graph `{λ' + τ(λ')}` of `τ: Λ' → Λ`; the columns are `Λ' + Λ τ`.
pub fn graph_of_symmetric<R: Field>(
    lambda_prime: &IsotropicSub<R>,
    lambda: &IsotropicSub<R>,
    tau: &SuperMatrix<R>,
) -> Result<IsotropicSub<R>> {
    if tau.row_dims() != lambda.dims() || tau.col_dims() != lambda_prime.dims() {
        return Err(Error::ShapeMismatch("τ must map Λ' to Λ".into()));
    }
    let v = lambda.space();
    let image = lambda.gens.try_mul(tau)?;
    let cross = v.pairing(image.entries(), lambda_prime.gens.entries())
        + v.pairing(lambda_prime.gens.entries(), image.entries());
    if !cross.is_zero() {
        return Err(Error::NotSymmetric);
    }
    let gens = SuperMatrix::new(v.dims(), lambda_prime.dims(), lambda_prime.gens.entries().clone() + image.entries().clone())?;
    IsotropicSub::new(v, gens)
}

/// Both sides of the triple-Lagrangian identity.
#[derive(Clone, Debug)]
pub struct TripleCheck<R> {
    pub lhs: GrassmannElt<R>,
    pub rhs: GrassmannElt<R>,
    /// `Some(+1)` or `Some(-1)` when `lhs = ±rhs`, `None` otherwise.
    pub sign: Option<i8>,
    pub tau1: SuperMatrix<R>,
    pub tau2: SuperMatrix<R>,
}

/// `θ(L1,L2)` against `θ(L1,Λ) θ(L2,Λ) ber(τ1 − τ2)`, where `L_i` is the
/// graph of `τ_i` over `Λ ⊕ Λ'` and `Λ'` is identified with `Λ^∨` by the pairing.
pub fn triple_product_check<R: Field>(
    l1: &IsotropicSub<R>,
    l2: &IsotropicSub<R>,
    lambda: &IsotropicSub<R>,
    lambda_prime: &IsotropicSub<R>,
) -> Result<TripleCheck<R>> {
    let v = lambda.space();
    // make Λ' dual to Λ
    let p = v.pairing(lambda.gens.entries(), lambda_prime.gens.entries());
    let dual = grassmann_inverse(&p).map_err(|_| Error::NotTransversal)?;
    let lp = SuperMatrix::new(v.dims(), lambda_prime.dims(), lambda_prime.gens.entries() * &dual)?;
    let splitting = join_split(&lambda.gens, &lp)?;
    let tau_of = |l: &IsotropicSub<R>| -> Result<SuperMatrix<R>> {
        let c = solve_in_span(&splitting.0, &l.gens).ok_or(Error::NotTransversal)?;
        let (x, y) = splitting.1(&c);
        let y_inv = grassmann_inverse(&y).map_err(|_| Error::NotTransversal)?;
        SuperMatrix::new(lambda.dims(), lambda_prime.dims(), &x * &y_inv)
    };
    let tau1 = tau_of(l1)?;
    let tau2 = tau_of(l2)?;
    let lhs = theta_section(l1, l2)?;
    let diff = SuperMatrix::new(
        tau1.row_dims(),
        tau1.col_dims(),
        tau1.entries().clone() - tau2.entries().clone(),
    )?;
    let rhs = theta_section(l1, lambda)? * theta_section(l2, lambda)? * ber(&diff)?;
    let sign = if lhs == rhs {
        Some(1)
    } else if lhs == -rhs.clone() {
        Some(-1)
    } else {
        None
    };
    Ok(TripleCheck { lhs, rhs, sign, tau1, tau2 })
}

type Splitter<R> = Box<dyn Fn(&SuperMatrix<R>) -> (GM<R>, GM<R>)>;

// Basis (Λ, Λ') in even-first layout, plus a splitter of coordinate columns
// into their Λ-part and Λ'-part.
fn join_split<R: Field>(lambda: &SuperMatrix<R>, lp: &SuperMatrix<R>) -> Result<(SuperMatrix<R>, Splitter<R>)> {
    let joined = join_columns(lambda, lp)?;
    let (a, b) = (lambda.col_dims(), lp.col_dims());
    let a_rows: Vec<usize> = (0..a.even).chain((0..a.odd).map(|i| a.even + b.even + i)).collect();
    let b_rows: Vec<usize> = (0..b.even).map(|i| a.even + i).chain((0..b.odd).map(|i| a.even + b.even + a.odd + i)).collect();
    let split = move |c: &SuperMatrix<R>| (c.entries().select_rows(&a_rows), c.entries().select_rows(&b_rows));
    Ok((joined, Box::new(split)))
}

/// Output of [`stabilize_odd`].
#[derive(Clone, Debug)]
pub struct Stabilized<R> {
    pub space: SympSpace<R>,
    pub l1: IsotropicSub<R>,
    pub l2: IsotropicSub<R>,
}

/// Appends an odd pair `e1, e2` with `<e1,e2> = <e2,e1> = 1`, putting `e1`
/// into `L1` and `e2` into `L2`. Only for odd rank of odd type.
pub fn stabilize_odd<R: Field>(l1: &IsotropicSub<R>, l2: &IsotropicSub<R>) -> Result<Stabilized<R>> {
    let n = l1.dims().odd;
    if n % 2 == 0 {
        return Err(Error::EvenAlready(n));
    }
    let v = l1.space();
    let extra = SympSpace::<R>::darboux(0, 1);
    let space = v.direct_sum(&extra);
    let (old_pos, new_pos) = embed_positions(v.dims(), extra.dims());
    let lift = |l: &IsotropicSub<R>, which: usize| -> Result<IsotropicSub<R>> {
        let d = l.dims();
        let cols = d.total() + 1;
        let mut e: GM<R> = Matrix::zeros(space.dims().total(), cols);
        for (i, &pi) in old_pos.iter().enumerate() {
            for j in 0..d.total() {
                e.set(pi, j, l.gens.get(i, j).clone());
            }
        }
        e.set(new_pos[which], d.total(), GrassmannElt::scalar(R::one()));
        IsotropicSub::new(&space, SuperMatrix::new(space.dims(), Dims::new(d.even, d.odd + 1), e)?)
    };
    Ok(Stabilized { l1: lift(l1, 0)?, l2: lift(l2, 1)?, space })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Shape;
    use crate::scalar::{int, Rational};

    type G = GrassmannElt<Rational>;
    type V = SympSpace<Rational>;

    fn k(n: i64) -> G {
        G::scalar(int(n))
    }

    fn vec_sub(v: &V, cols: Vec<Vec<G>>, dims: Dims) -> IsotropicSub<Rational> {
        let m = Matrix::from_rows(cols).unwrap().transpose();
        IsotropicSub::new(v, SuperMatrix::new(v.dims(), dims, m).unwrap()).unwrap()
    }

    #[test]
    fn maximal_isotropic_examples() {
        let v = V::darboux(1, 0);
        let e = IsotropicSub::coordinate(&v, &[0]).unwrap();
        assert!(e.is_maximal_isotropic());
        let diag = vec_sub(&v, vec![vec![k(1), k(1)]], Dims::new(1, 0));
        assert!(diag.is_maximal_isotropic());
        assert!(!IsotropicSub::coordinate(&v, &[0, 1]).unwrap().is_isotropic());
        let v4 = V::darboux(2, 0);
        let e1 = IsotropicSub::coordinate(&v4, &[0]).unwrap();
        assert!(e1.is_isotropic() && !e1.is_maximal_isotropic());
    }

    #[test]
    fn theta_examples() {
        let v = V::darboux(1, 0);
        let l1 = vec_sub(&v, vec![vec![k(2), k(0)]], Dims::new(1, 0));
        let l2 = IsotropicSub::coordinate(&v, &[1]).unwrap();
        assert_eq!(theta_section(&l1, &l2).unwrap(), k(2));
        let e = IsotropicSub::coordinate(&v, &[0]).unwrap();
        assert_eq!(theta_section(&e, &l2).unwrap(), k(1));
        assert_eq!(theta_section(&e, &e).unwrap_err(), Error::NotTransversal);
    }

    #[test]
    fn darboux_reduction() {
        let v = V::darboux(2, 0);
        let l1 = IsotropicSub::coordinate(&v, &[0, 1]).unwrap();
        let l2 = IsotropicSub::coordinate(&v, &[2, 3]).unwrap();
        let m = IsotropicSub::coordinate(&v, &[0]).unwrap();
        let red = reduce_by_isotropic(&l1, &l2, &m).unwrap();
        assert_eq!(red.space.dims(), Dims::new(2, 0));
        assert!(red.l1.is_maximal_isotropic() && red.l2.is_maximal_isotropic());
        // V̄ is spanned by e2, f2
        let e2f2 = IsotropicSub::coordinate(&v, &[1, 3]).unwrap();
        assert!(IsotropicSub::new(&v, red.complement.clone()).unwrap().same_span(&e2f2));
        assert_eq!(
            theta_section(&red.l1_adapted, &red.l2_adapted).unwrap(),
            theta_section(&red.l1, &red.l2).unwrap()
        );
        let outside = IsotropicSub::coordinate(&v, &[2]).unwrap();
        assert_eq!(reduce_by_isotropic(&l1, &l2, &outside).unwrap_err(), Error::NotContained);
    }

    #[test]
    fn reduce_by_whole_lagrangian() {
        let v = V::darboux(1, 1);
        let l1 = IsotropicSub::coordinate(&v, &[0, 2]).unwrap();
        let l2 = IsotropicSub::coordinate(&v, &[1, 3]).unwrap();
        let red = reduce_by_isotropic(&l1, &l2, &l1).unwrap();
        assert_eq!(red.space.dims(), Dims::new(0, 0));
        assert_eq!(l2.intersection_dims(&l1), Dims::new(0, 0));
    }

    #[test]
    fn graphs() {
        let v = V::darboux(1, 0);
        let lam = IsotropicSub::coordinate(&v, &[0]).unwrap();
        let lp = IsotropicSub::coordinate(&v, &[1]).unwrap();
        let zero = SuperMatrix::new(Dims::new(1, 0), Dims::new(1, 0), Matrix::from_rows(vec![vec![k(0)]]).unwrap()).unwrap();
        assert!(graph_of_symmetric(&lp, &lam, &zero).unwrap().same_span(&lp));
        let c = SuperMatrix::new(Dims::new(1, 0), Dims::new(1, 0), Matrix::from_rows(vec![vec![k(7)]]).unwrap()).unwrap();
        assert!(graph_of_symmetric(&lp, &lam, &c).unwrap().is_maximal_isotropic());
        // skew τ on a (2|0) Lagrangian is rejected
        let v4 = V::darboux(2, 0);
        let lam = IsotropicSub::coordinate(&v4, &[0, 1]).unwrap();
        let lp = IsotropicSub::coordinate(&v4, &[2, 3]).unwrap();
        let skew = SuperMatrix::new(
            Dims::new(2, 0),
            Dims::new(2, 0),
            Matrix::from_rows(vec![vec![k(0), k(1)], vec![k(-1), k(0)]]).unwrap(),
        )
        .unwrap();
        assert_eq!(graph_of_symmetric(&lp, &lam, &skew).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn triple_in_q2() {
        let v = V::darboux(1, 0);
        let lam = IsotropicSub::coordinate(&v, &[0]).unwrap();
        let lp = IsotropicSub::coordinate(&v, &[1]).unwrap();
        let t = |x: i64| SuperMatrix::new(Dims::new(1, 0), Dims::new(1, 0), Matrix::from_rows(vec![vec![k(x)]]).unwrap()).unwrap();
        let l1 = graph_of_symmetric(&lp, &lam, &t(1)).unwrap();
        let l2 = graph_of_symmetric(&lp, &lam, &t(0)).unwrap();
        let chk = triple_product_check(&l1, &l2, &lam, &lp).unwrap();
        assert!(chk.sign.is_some());
        assert_eq!(num_traits::Signed::abs(&chk.lhs.constant_term()), int(1));
        assert_eq!(triple_product_check(&l1, &l1, &lam, &lp).unwrap_err(), Error::NotTransversal);
    }

    #[test]
    fn stabilization() {
        let v = V::darboux(0, 1);
        let l1 = IsotropicSub::coordinate(&v, &[0]).unwrap();
        let l2 = IsotropicSub::coordinate(&v, &[1]).unwrap();
        let st = stabilize_odd(&l1, &l2).unwrap();
        assert_eq!(st.space.dims(), Dims::new(0, 4));
        assert_eq!(st.l1.dims(), Dims::new(0, 2));
        assert!(st.l1.is_maximal_isotropic() && st.l2.is_maximal_isotropic());
        assert_eq!(st.l1.intersection_dims(&st.l2), l1.intersection_dims(&l2));
        assert!(theta_section(&st.l1, &st.l2).is_ok());
        assert_eq!(stabilize_odd(&st.l1, &st.l2).unwrap_err(), Error::EvenAlready(2));
    }

    #[test]
    fn odd_pairing_with_grassmann_coordinates() {
        let s = Shape::full(2);
        let v = V::darboux(1, 1);
        let eta = G::generator(s, 0);
        // even vector e + eps*η1 pairs with itself to zero
        let u = Matrix::from_rows(vec![vec![k(1)], vec![k(0)], vec![eta.clone()], vec![k(0)]]).unwrap();
        assert!(v.pairing(&u, &u).is_zero());
        // <eps η1, eps' η1> = -η1 η1 = 0; <eps' η1, eps η2> sign check
        let eta2 = G::generator(s, 1);
        let a = Matrix::from_rows(vec![vec![k(0)], vec![k(0)], vec![k(0)], vec![eta.clone()]]).unwrap();
        let b = Matrix::from_rows(vec![vec![k(0)], vec![k(0)], vec![eta2.clone()], vec![k(0)]]).unwrap();
        assert_eq!(v.pairing(&a, &b).get(0, 0), &(-(eta * eta2)));
    }
}
