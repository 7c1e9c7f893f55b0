//! Quantum seeds `(Λ, B̃, X)`, compatibility, and mutation.
//!
//! Cluster entries are stored as full torus elements of one fixed ambient
//! torus (the torus of the seed the mutation walk started from), so every
//! mutated variable is immediately a Laurent expansion there. The new
//! variable produced by `μ_k` is computed from the toric frame of the
//! current seed,
//!
//! ```text
//! X'_k = ( v^{Λ(a+, e_k)} M(a+) + v^{Λ(a-, e_k)} M(a-) ) · X_k^{-1},
//! a± = Σ_j [±b_jk]_+ e_j,
//! ```
//!
//! where the right factor `X_k^{-1}` is removed by exact division in the
//! ambient torus. A failed division means the result is not Laurent.

use serde_json::{json, Value};
use thiserror::Error;

use crate::qtorus::json::{i64_from_json, shape};
use crate::qtorus::{ExpVec, JsonError, SkewForm, TorusElement, TorusError, VPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error("B̃ has {btilde_rows} rows but Λ is {m}×{m}")]
    Shape { m: usize, btilde_rows: usize },
    #[error("B̃^T Λ is not diagonal on the left block: entry ({i}, {j}) = {value}")]
    NonDiagonal { i: usize, j: usize, value: i64 },
    #[error("B̃^T Λ has a nonzero right block: entry ({i}, {j}) = {value}")]
    NonzeroRightBlock { i: usize, j: usize, value: i64 },
    #[error("diagonal entry {i} of D is {value}, expected a positive integer")]
    NonPositiveDiagonal { i: usize, value: i64 },
}

#[derive(Debug, Error)]
pub enum SeedError {
    #[error("invalid seed shape: {0}")]
    Shape(String),
    #[error("mutation index {k} out of range 1..={m}")]
    IndexOutOfRange { k: usize, m: usize },
    #[error("mutation index {k} is frozen (mutable positions are 1..={n})")]
    FrozenIndex { k: usize, n: usize },
    #[error("exchange quotient at position {k} is not a Laurent polynomial")]
    NotLaurent { k: usize },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Json(#[from] JsonError),
}

/// Returns the diagonal of `D` when `B̃^T Λ = (D | 0)` with `D` positive diagonal.
pub fn check_compatible(lambda: &SkewForm, btilde: &[Vec<i64>]) -> Result<Vec<i64>, CompatError> {
    let m = lambda.dim();
    if btilde.len() != m {
        return Err(CompatError::Shape { m, btilde_rows: btilde.len() });
    }
    let n = btilde.first().map_or(0, Vec::len);
    if btilde.iter().any(|r| r.len() != n) {
        return Err(CompatError::Shape { m, btilde_rows: btilde.len() });
    }
    // product[i][j] = Σ_r b_{ri} Λ_{rj}
    let product: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..m).map(|j| (0..m).map(|r| btilde[r][i] * lambda.entry(r, j)).sum()).collect())
        .collect();
    for (i, row) in product.iter().enumerate() {
        for (j, &value) in row.iter().enumerate().take(n) {
            if i != j && value != 0 {
                return Err(CompatError::NonDiagonal { i, j, value });
            }
        }
    }
    for (i, row) in product.iter().enumerate() {
        for (j, &value) in row.iter().enumerate().skip(n) {
            if value != 0 {
                return Err(CompatError::NonzeroRightBlock { i, j, value });
            }
        }
    }
    let diag: Vec<i64> = (0..n).map(|i| product[i][i]).collect();
    if let Some((i, &value)) = diag.iter().enumerate().find(|(_, &d)| d <= 0) {
        return Err(CompatError::NonPositiveDiagonal { i, value });
    }
    Ok(diag)
}

/// A right fraction `numerator · denominator^{-1}` in a quantum torus.
#[derive(Clone, Debug)]
pub struct ExchangeFraction {
    pub torus: SkewForm,
    pub numerator: TorusElement,
    pub denominator: TorusElement,
}

impl ExchangeFraction {
    /// Wraps an element that is already Laurent.
    pub fn laurent(torus: SkewForm, x: TorusElement) -> Self {
        let m = x.dim();
        ExchangeFraction { torus, numerator: x, denominator: TorusElement::one(m) }
    }

    /// The Laurent quotient, if one exists.
    pub fn reduce(&self) -> Option<TorusElement> {
        right_divide(&self.torus, &self.numerator, &self.denominator)
    }
}

/// True iff the fraction is a Laurent polynomial with coefficients in `Z[v^{±1}]`.
pub fn laurent_check(frac: &ExchangeFraction) -> bool {
    frac.reduce().is_some()
}

/// Exact right division: the `Q` with `Q · den = num`, if it exists.
///
/// Long division on the lexicographically largest term. The exponents of
/// any exact quotient are confined to the box between the coordinate-wise
/// extremes of `num` minus those of `den`, which bounds the loop.
pub fn right_divide(
    lambda: &SkewForm,
    num: &TorusElement,
    den: &TorusElement,
) -> Option<TorusElement> {
    let m = num.dim();
    if den.is_zero() || den.dim() != m || lambda.dim() != m {
        return None;
    }
    if num.is_zero() {
        return Some(TorusElement::zero(m));
    }
    let (lo_n, hi_n) = coord_box(num);
    let (lo_d, hi_d) = coord_box(den);
    let lo: Vec<i64> = lo_n.iter().zip(&lo_d).map(|(a, b)| a - b).collect();
    let hi: Vec<i64> = hi_n.iter().zip(&hi_d).map(|(a, b)| a - b).collect();

    let (dlead, dcoef) = den.last_term().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rem = num.clone();
    let mut quot = TorusElement::zero(m);
    while let Some((pe, pc)) = rem.last_term() {
        let qe = pe - &dlead;
        if qe.coords().iter().enumerate().any(|(i, &c)| c < lo[i] || c > hi[i]) {
            return None;
        }
        let twist = lambda.pairing(&qe, &dlead);
        let qc = pc.shift(-twist).div_exact(&dcoef)?;
        let step = lambda.product(&TorusElement::monomial(qe.clone(), qc.clone()), den);
        rem = rem.sub(&step);
        quot.add_term(qe, &qc);
    }
    Some(quot)
}

fn coord_box(x: &TorusElement) -> (Vec<i64>, Vec<i64>) {
    let m = x.dim();
    let mut lo = vec![i64::MAX; m];
    let mut hi = vec![i64::MIN; m];
    for e in x.support() {
        for i in 0..m {
            lo[i] = lo[i].min(e[i]);
            hi[i] = hi[i].max(e[i]);
        }
    }
    (lo, hi)
}

/// A quantum seed together with the ambient torus its cluster is expanded in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSeed {
    torus: SkewForm,
    lambda: SkewForm,
    btilde: Vec<Vec<i64>>,
    cluster: Vec<TorusElement>,
}

impl QuantumSeed {
    /// The initial seed `(Λ, B̃, {X^{e_i}})`; its own torus is the ambient one.
    pub fn initial(lambda: SkewForm, btilde: Vec<Vec<i64>>) -> Result<Self, SeedError> {
        let m = lambda.dim();
        let cluster = (0..m).map(|i| TorusElement::x(ExpVec::unit(m, i))).collect();
        Self::from_parts(lambda.clone(), lambda, btilde, cluster)
    }

    pub fn from_parts(
        torus: SkewForm,
        lambda: SkewForm,
        btilde: Vec<Vec<i64>>,
        cluster: Vec<TorusElement>,
    ) -> Result<Self, SeedError> {
        let m = lambda.dim();
        if torus.dim() != m {
            return Err(SeedError::Shape(format!("torus form is {0}×{0}, Λ is {m}×{m}", torus.dim())));
        }
        if btilde.len() != m {
            return Err(SeedError::Shape(format!("B̃ has {} rows, expected {m}", btilde.len())));
        }
        let n = btilde.first().map_or(0, Vec::len);
        if n == 0 || n > m || btilde.iter().any(|r| r.len() != n) {
            return Err(SeedError::Shape("B̃ must be m×n with 1 ≤ n ≤ m".into()));
        }
        if cluster.len() != m || cluster.iter().any(|x| x.dim() != m) {
            return Err(SeedError::Shape(format!("cluster must hold {m} elements of a rank-{m} torus")));
        }
        Ok(QuantumSeed { torus, lambda, btilde, cluster })
    }

    pub fn torus(&self) -> &SkewForm {
        &self.torus
    }

    pub fn lambda(&self) -> &SkewForm {
        &self.lambda
    }

    pub fn btilde(&self) -> &[Vec<i64>] {
        &self.btilde
    }

    pub fn cluster(&self) -> &[TorusElement] {
        &self.cluster
    }

    /// `m`: the number of cluster plus coefficient positions.
    pub fn rank(&self) -> usize {
        self.lambda.dim()
    }

    /// `n`: the number of mutable positions.
    pub fn mutable_count(&self) -> usize {
        self.btilde[0].len()
    }

    pub fn frozen_count(&self) -> usize {
        self.rank() - self.mutable_count()
    }

    pub fn check_compatible(&self) -> Result<Vec<i64>, CompatError> {
        check_compatible(&self.lambda, &self.btilde)
    }

    fn validate_index(&self, k: usize) -> Result<usize, SeedError> {
        let (m, n) = (self.rank(), self.mutable_count());
        if k == 0 || k > m {
            return Err(SeedError::IndexOutOfRange { k, m });
        }
        if k > n {
            return Err(SeedError::FrozenIndex { k, n });
        }
        Ok(k - 1)
    }

    /// `M(c)` for a nonnegative exponent vector in this seed's toric frame.
    fn toric_monomial(&self, c: &[i64]) -> TorusElement {
        let m = self.rank();
        let mut twist = 0;
        for i in 0..m {
            for j in i + 1..m {
                twist += c[i] * c[j] * self.lambda.entry(i, j);
            }
        }
        let mut acc = TorusElement::scalar(m, VPoly::vpow(-twist));
        for (i, &ci) in c.iter().enumerate() {
            debug_assert!(ci >= 0);
            for _ in 0..ci {
                acc = self.torus.product(&acc, &self.cluster[i]);
            }
        }
        acc
    }

    /// The exchange quotient defining the new variable at position `k` (1-based).
    pub fn exchange_fraction(&self, k: usize) -> Result<ExchangeFraction, SeedError> {
        let kk = self.validate_index(k)?;
        let m = self.rank();
        let plus: Vec<i64> = (0..m).map(|j| self.btilde[j][kk].max(0)).collect();
        let minus: Vec<i64> = (0..m).map(|j| (-self.btilde[j][kk]).max(0)).collect();
        let ek = ExpVec::unit(m, kk);
        let mut numerator = TorusElement::zero(m);
        for a in [&plus, &minus] {
            let w = self.lambda.pairing(&ExpVec::from(a.as_slice()), &ek);
            numerator = numerator.add(&self.toric_monomial(a).shift_v(w));
        }
        Ok(ExchangeFraction {
            torus: self.torus.clone(),
            numerator,
            denominator: self.cluster[kk].clone(),
        })
    }

    /// The mutation `μ_k` (1-based `k`).
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed, SeedError> {
        let kk = self.validate_index(k)?;
        let m = self.rank();
        let n = self.mutable_count();
        let b = &self.btilde;

        // Λ' = E^T Λ E
        let e = |i: usize, j: usize| -> i64 {
            if j != kk {
                (i == j) as i64
            } else if i == kk {
                -1
            } else {
                (-b[i][kk]).max(0)
            }
        };
        let mut new_lambda = vec![vec![0i64; m]; m];
        for (r, row) in new_lambda.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                let mut s = 0;
                for i in 0..m {
                    let eir = e(i, r);
                    if eir == 0 {
                        continue;
                    }
                    for j in 0..m {
                        s += eir * self.lambda.entry(i, j) * e(j, c);
                    }
                }
                *slot = s;
            }
        }
        let new_lambda = SkewForm::new(&new_lambda)?;

        let mut new_b = b.clone();
        for i in 0..m {
            for j in 0..n {
                new_b[i][j] = if i == kk || j == kk {
                    -b[i][j]
                } else {
                    b[i][j] + b[i][kk].max(0) * b[kk][j] + b[i][kk] * (-b[kk][j]).max(0)
                };
            }
        }

        let x_new = self
            .exchange_fraction(k)?
            .reduce()
            .ok_or(SeedError::NotLaurent { k })?;
        let mut cluster = self.cluster.clone();
        cluster[kk] = x_new;

        Ok(QuantumSeed {
            torus: self.torus.clone(),
            lambda: new_lambda,
            btilde: new_b,
            cluster,
        })
    }

    /// `{"btilde":..,"cluster":[..],"lambda":..,"torus":..}`.
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.rows(),
            "btilde": self.btilde,
            "cluster": self.cluster.iter().map(TorusElement::to_json).collect::<Vec<_>>(),
            "torus": self.torus.rows(),
        })
    }

    /// Parses a seed. `torus` defaults to `lambda`; `cluster` defaults to
    /// the initial monomials `X^{e_i}`.
    pub fn from_json(v: &Value) -> Result<QuantumSeed, SeedError> {
        let lambda = SkewForm::new(&matrix_from_json(v.get("lambda"), "lambda")?)?;
        let btilde = matrix_from_json(v.get("btilde"), "btilde")?;
        let torus = match v.get("torus") {
            Some(t) => SkewForm::new(&matrix_from_json(Some(t), "torus")?)?,
            None => lambda.clone(),
        };
        let m = lambda.dim();
        let cluster = match v.get("cluster") {
            Some(Value::Array(items)) => items
                .iter()
                .map(TorusElement::from_json)
                .collect::<Result<Vec<_>, _>>()?,
            Some(other) => return Err(shape("cluster", other.to_string()).into()),
            None => (0..m).map(|i| TorusElement::x(ExpVec::unit(m, i))).collect(),
        };
        Self::from_parts(torus, lambda, btilde, cluster)
    }
}

fn matrix_from_json(v: Option<&Value>, what: &'static str) -> Result<Vec<Vec<i64>>, JsonError> {
    let rows = v.and_then(Value::as_array).ok_or_else(|| shape(what, "expected an array of rows"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| shape(what, r.to_string()))?
                .iter()
                .map(|x| i64_from_json(x, what))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron_lambda() -> SkewForm {
        SkewForm::new(&[
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
            vec![1, 0, 0, -2],
            vec![0, 1, 2, 0],
        ])
        .unwrap()
    }

    fn kron_btilde() -> Vec<Vec<i64>> {
        vec![vec![0, 2], vec![-2, 0], vec![1, 0], vec![0, 1]]
    }

    fn x(e: [i64; 4]) -> TorusElement {
        TorusElement::x(e)
    }

    #[test]
    fn kronecker_pair_is_compatible_with_identity_d() {
        assert_eq!(check_compatible(&kron_lambda(), &kron_btilde()), Ok(vec![1, 1]));
    }

    #[test]
    fn sign_flip_breaks_positivity() {
        let neg: Vec<Vec<i64>> = kron_btilde().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert_eq!(
            check_compatible(&kron_lambda(), &neg),
            Err(CompatError::NonPositiveDiagonal { i: 0, value: -1 })
        );
    }

    #[test]
    fn zero_form_is_incompatible() {
        assert!(matches!(
            check_compatible(&SkewForm::zero(4), &kron_btilde()),
            Err(CompatError::NonPositiveDiagonal { .. })
        ));
    }

    #[test]
    fn off_diagonal_and_right_block_reported_distinctly() {
        // rank 2, no frozen: B = [[0,1],[-1,0]], Λ = [[0,1],[-1,0]] gives B^T Λ = I.
        let l = SkewForm::new(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(check_compatible(&l, &[vec![0, 1], vec![-1, 0]]), Ok(vec![1, 1]));
        // a single column against a 2×2 form: B^T Λ = (0, 1) has a nonzero right block
        assert_eq!(
            check_compatible(&l, &[vec![1], vec![0]]),
            Err(CompatError::NonzeroRightBlock { i: 0, j: 1, value: 1 })
        );
        // B^T Λ = [[1,1],[-1,... ]]: off-diagonal
        assert!(matches!(
            check_compatible(&l, &[vec![0, 1], vec![-1, 1]]),
            Err(CompatError::NonDiagonal { .. })
        ));
    }

    #[test]
    fn first_mutations_of_kronecker_seed() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap();
        let s2 = seed.mutate(2).unwrap();
        assert_eq!(s2.cluster()[1], x([2, -1, 0, 1]).add(&x([0, -1, 0, 0])));
        let s1 = seed.mutate(1).unwrap();
        assert_eq!(s1.cluster()[0], x([-1, 0, 1, 0]).add(&x([-1, 2, 0, 0])));
        assert_eq!(s1.check_compatible(), Ok(vec![1, 1]));
        assert_eq!(s2.check_compatible(), Ok(vec![1, 1]));
    }

    #[test]
    fn mutation_is_an_involution() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap();
        let mut s = seed.clone();
        for &k in &[1, 2, 1, 2, 2, 1] {
            s = s.mutate(k).unwrap();
        }
        for k in 1..=2 {
            assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
        }
        assert_eq!(seed.mutate(1).unwrap().mutate(1).unwrap(), seed);
    }

    #[test]
    fn frozen_and_out_of_range_indices_fail() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap();
        assert!(matches!(seed.mutate(3), Err(SeedError::FrozenIndex { k: 3, n: 2 })));
        assert!(matches!(seed.mutate(0), Err(SeedError::IndexOutOfRange { .. })));
        assert!(matches!(seed.mutate(5), Err(SeedError::IndexOutOfRange { .. })));
    }

    #[test]
    fn sign_rule_on_exchange_matrix() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap();
        let s = seed.mutate(1).unwrap();
        for i in 0..4 {
            assert_eq!(s.btilde()[i][0], -seed.btilde()[i][0]);
        }
        for j in 0..2 {
            assert_eq!(s.btilde()[0][j], -seed.btilde()[0][j]);
        }
    }

    #[test]
    fn laurent_check_accepts_exchange_and_rejects_non_laurent() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap();
        let s = seed.mutate(2).unwrap().mutate(1).unwrap().mutate(2).unwrap();
        assert!(laurent_check(&s.exchange_fraction(1).unwrap()));
        let bad = ExchangeFraction {
            torus: kron_lambda(),
            numerator: TorusElement::one(4),
            denominator: TorusElement::one(4).add(&x([1, 0, 0, 0])),
        };
        assert!(!laurent_check(&bad));
        assert!(laurent_check(&ExchangeFraction::laurent(kron_lambda(), x([1, 2, 3, 4]))));
    }

    #[test]
    fn right_division_inverts_multiplication() {
        let l = kron_lambda();
        let a = x([1, 0, 0, 0]).add(&x([0, -1, 1, 0]).shift_v(3)).add(&x([-2, 1, 0, 1]));
        let b = x([2, -1, 0, 1]).add(&x([0, -1, 0, 0]));
        let p = l.product(&a, &b);
        assert_eq!(right_divide(&l, &p, &b), Some(a));
    }

    #[test]
    fn json_roundtrip() {
        let seed = QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap().mutate(2).unwrap();
        let v = seed.to_json();
        assert_eq!(QuantumSeed::from_json(&v).unwrap(), seed);
        let minimal = json!({"lambda": kron_lambda().rows(), "btilde": kron_btilde()});
        let parsed = QuantumSeed::from_json(&minimal).unwrap();
        assert_eq!(parsed, QuantumSeed::initial(kron_lambda(), kron_btilde()).unwrap());
    }
}
