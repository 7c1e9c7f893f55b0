//! The Kronecker quiver with principal coefficients.
//!
//! Fixed data (vertices 1, 2 mutable; 3, 4 frozen):
//!
//! ```text
//!     [ 0  0 -1  0]          [ 0  2]
//! Λ = [ 0  0  0 -1]     B̃ =  [-2  0]
//!     [ 1  0  0 -2]          [ 1  0]
//!     [ 0  1  2  0]          [ 0  1]
//! ```
//!
//! `x_1 = X^{e_1}`, `x_2 = X^{e_2}`, `y_1 = X^{e_3}`, `y_2 = X^{e_4}`,
//! `t = X^{(0,0,1,1)}`. The remaining cluster variables come from the two
//! alternating mutation chains: `μ_1, μ_2, μ_1, ...` yields `x_3, x_4, ...`
//! and `μ_2, μ_1, μ_2, ...` yields `x_0, x_{-1}, ...`. Odd-indexed variables
//! sit in slot 1, even-indexed ones in slot 2.
//!
//! A [`KronContext`] can also be built in classical mode (`q = 1`): the same
//! mutation engine runs with the zero skew form, so all products commute and
//! every `q`-power evaluates to 1. This gives an independent pipeline for the
//! specialized identities.
//!
//! Caches are shared behind locks: reads take a read lock, and fills happen
//! under a write lock (the mutation chain under its own mutex), so one
//! context can serve a parallel sweep.

mod identities;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::expr::Expr;
use crate::qtorus::{ExpVec, SkewForm, TorusElement, VPoly};
use crate::seedmut::QuantumSeed;

pub use identities::{
    positivity_report, verify_cases, verify_classical, CaseResult, IdentityCase, Report, Suite,
};

pub const LAMBDA: [[i64; 4]; 4] = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, -2], [0, 1, 2, 0]];
pub const BTILDE: [[i64; 2]; 4] = [[0, 2], [-2, 0], [1, 0], [0, 1]];
/// `Ĩ − R̃′`, mapping a dimension vector to minus the minimal exponent of its character.
pub const I_MINUS_R: [[i64; 2]; 4] = [[1, -2], [0, 1], [-1, 0], [0, -1]];

pub fn kron_lambda() -> SkewForm {
    SkewForm::new(&LAMBDA.map(Vec::from)).expect("constant form is skew")
}

pub fn kron_btilde() -> Vec<Vec<i64>> {
    BTILDE.iter().map(|r| r.to_vec()).collect()
}

/// The three-term element `X_δ`.
pub fn xdelta_terms() -> TorusElement {
    TorusElement::x([1, -1, 1, 1])
        .add(&TorusElement::x([-1, -1, 1, 0]))
        .add(&TorusElement::x([-1, 1, 0, 0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Quantum,
    /// `q = 1`: commutative, all `v`-powers are 1.
    Classical,
}

struct Chain {
    up: QuantumSeed,
    top: i64,
    down: QuantumSeed,
    bottom: i64,
}

pub struct KronContext {
    mode: Mode,
    torus: SkewForm,
    chain: Mutex<Chain>,
    xs: RwLock<BTreeMap<i64, Arc<TorusElement>>>,
    ss: RwLock<Vec<Arc<TorusElement>>>,
    fs: RwLock<Vec<Arc<TorusElement>>>,
}

impl Default for KronContext {
    fn default() -> Self {
        Self::new()
    }
}

impl KronContext {
    pub fn new() -> Self {
        Self::with_mode(Mode::Quantum)
    }

    pub fn classical() -> Self {
        Self::with_mode(Mode::Classical)
    }

    pub fn with_mode(mode: Mode) -> Self {
        let torus = match mode {
            Mode::Quantum => kron_lambda(),
            Mode::Classical => SkewForm::zero(4),
        };
        let seed = QuantumSeed::initial(torus.clone(), kron_btilde()).expect("constant seed is well formed");
        let mut xs = BTreeMap::new();
        xs.insert(1, Arc::new(seed.cluster()[0].clone()));
        xs.insert(2, Arc::new(seed.cluster()[1].clone()));
        let one = Arc::new(TorusElement::one(4));
        let xd = Arc::new(xdelta_terms());
        KronContext {
            mode,
            torus,
            chain: Mutex::new(Chain { up: seed.clone(), top: 2, down: seed, bottom: 1 }),
            xs: RwLock::new(xs),
            ss: RwLock::new(vec![one.clone(), xd.clone()]),
            fs: RwLock::new(vec![one, xd]),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The form the products are taken in (zero in classical mode).
    pub fn torus(&self) -> &SkewForm {
        &self.torus
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        self.torus.product(a, b)
    }

    /// `v^k`, or 1 in classical mode.
    pub fn vpow(&self, k: i64) -> TorusElement {
        match self.mode {
            Mode::Quantum => TorusElement::scalar(4, VPoly::vpow(k)),
            Mode::Classical => TorusElement::one(4),
        }
    }

    pub fn y1(&self) -> TorusElement {
        TorusElement::x([0, 0, 1, 0])
    }

    pub fn y2(&self) -> TorusElement {
        TorusElement::x([0, 0, 0, 1])
    }

    /// `t = X^{(0,0,1,1)}`.
    pub fn t(&self) -> TorusElement {
        TorusElement::x([0, 0, 1, 1])
    }

    pub fn xdelta(&self) -> TorusElement {
        xdelta_terms()
    }

    /// The cluster variable `x_m`.
    pub fn cluster_var(&self, m: i64) -> Arc<TorusElement> {
        if let Some(x) = self.xs.read().unwrap().get(&m) {
            return x.clone();
        }
        let mut chain = self.chain.lock().unwrap();
        if m >= 3 {
            while chain.top < m {
                let next = chain.top + 1;
                chain.up = chain.up.mutate(slot(next)).expect("Kronecker mutation stays Laurent");
                let x = Arc::new(chain.up.cluster()[slot(next) - 1].clone());
                self.xs.write().unwrap().insert(next, x);
                chain.top = next;
            }
        } else {
            while chain.bottom > m {
                let next = chain.bottom - 1;
                chain.down = chain.down.mutate(slot(next)).expect("Kronecker mutation stays Laurent");
                let x = Arc::new(chain.down.cluster()[slot(next) - 1].clone());
                self.xs.write().unwrap().insert(next, x);
                chain.bottom = next;
            }
        }
        drop(chain);
        self.xs.read().unwrap()[&m].clone()
    }

    /// `S_n`: `S_0 = 1`, `S_1 = X_δ`, `S_{n+1} = S_n S_1 − t S_{n−1}`.
    pub fn cheb_s(&self, n: usize) -> Arc<TorusElement> {
        self.cheb(&self.ss, n, |_| 1)
    }

    /// `F_n`: `F_0 = 1`, `F_1 = X_δ`, `F_2 = F_1 F_1 − 2t`, `F_{n+1} = F_n F_1 − t F_{n−1}`.
    pub fn cheb_f(&self, n: usize) -> Arc<TorusElement> {
        self.cheb(&self.fs, n, |k| if k == 1 { 2 } else { 1 })
    }

    fn cheb(
        &self,
        cache: &RwLock<Vec<Arc<TorusElement>>>,
        n: usize,
        tail: impl Fn(usize) -> i64,
    ) -> Arc<TorusElement> {
        if let Some(x) = cache.read().unwrap().get(n) {
            return x.clone();
        }
        let mut c = cache.write().unwrap();
        let t = self.t();
        while c.len() <= n {
            let k = c.len() - 1;
            let next = self
                .mul(&c[k], &c[1])
                .sub(&self.mul(&t, &c[k - 1]).scale_int(tail(k)));
            c.push(Arc::new(next));
        }
        c[n].clone()
    }

    /// The normalized cluster monomial `v^{−abλ} x_m^a x_{m+1}^b`, where
    /// `x_m x_{m+1} = v^{2λ} x_{m+1} x_m`. This is the bar-invariant
    /// representative.
    pub fn cluster_monomial(&self, m: i64, a: u32, b: u32) -> TorusElement {
        let xm = self.cluster_var(m);
        let xn = self.cluster_var(m + 1);
        let lam = match self.mode {
            Mode::Quantum => self.quasi_commutation(&xm, &xn),
            Mode::Classical => 0,
        };
        let mut acc = self.vpow(-(a as i64) * (b as i64) * lam);
        for _ in 0..a {
            acc = self.mul(&acc, &xm);
        }
        for _ in 0..b {
            acc = self.mul(&acc, &xn);
        }
        acc
    }

    /// The `λ` with `x y = v^{2λ} y x`; panics if the pair does not quasi-commute.
    fn quasi_commutation(&self, x: &TorusElement, y: &TorusElement) -> i64 {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        let (e, c1) = xy.last_term().expect("nonzero product");
        let c2 = yx.coeff(e);
        let shift = c1.max_exp().expect("nonzero") - c2.max_exp().expect("cluster pair quasi-commutes");
        assert!(shift % 2 == 0 && yx.shift_v(shift) == xy, "cluster pair does not quasi-commute");
        shift / 2
    }

    /// Evaluates an expression, keeping the written order of products.
    pub fn eval(&self, e: &Expr) -> TorusElement {
        match e {
            Expr::Cluster(m) => (*self.cluster_var(*m)).clone(),
            Expr::ChebS(n) => (*self.cheb_s(*n)).clone(),
            Expr::ChebF(n) => (*self.cheb_f(*n)).clone(),
            Expr::Monomial(x) => TorusElement::x(ExpVec::from(*x)),
            Expr::VPow(k) => self.vpow(*k),
            Expr::Int(c) => TorusElement::one(4).scale_int(*c),
            Expr::Add(a, b) => self.eval(a).add(&self.eval(b)),
            Expr::Sub(a, b) => self.eval(a).sub(&self.eval(b)),
            Expr::Neg(a) => self.eval(a).neg(),
            Expr::Mul(a, b) => self.mul(&self.eval(a), &self.eval(b)),
        }
    }
}

/// 1-based seed slot holding `x_m`.
fn slot(m: i64) -> usize {
    if m.rem_euclid(2) == 1 {
        1
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{mono, qh, x, y2};

    fn ctx() -> KronContext {
        KronContext::new()
    }

    #[test]
    fn initial_and_first_mutated_variables() {
        let c = ctx();
        assert_eq!(*c.cluster_var(1), TorusElement::x([1, 0, 0, 0]));
        assert_eq!(*c.cluster_var(2), TorusElement::x([0, 1, 0, 0]));
        assert_eq!(*c.cluster_var(0), TorusElement::x([2, -1, 0, 1]).add(&TorusElement::x([0, -1, 0, 0])));
        assert_eq!(*c.cluster_var(3), TorusElement::x([-1, 0, 1, 0]).add(&TorusElement::x([-1, 2, 0, 0])));
    }

    #[test]
    fn xdelta_from_cluster_variables() {
        let c = ctx();
        let e = x(0) * x(3) - qh(3) * x(1) * x(2) * y2();
        assert_eq!(c.eval(&e), c.xdelta());
        assert!(c.xdelta().is_bar_invariant());
    }

    #[test]
    fn chebyshev_small_cases() {
        let c = ctx();
        assert_eq!(*c.cheb_s(0), TorusElement::one(4));
        assert_eq!(*c.cheb_s(1), c.xdelta());
        let s1 = c.cheb_s(1);
        assert_eq!(*c.cheb_s(2), c.mul(&s1, &s1).sub(&c.t()));
        assert_eq!(*c.cheb_f(2), c.cheb_s(2).sub(&c.t()));
        assert_eq!(*c.cheb_f(5), c.cheb_s(5).sub(&c.mul(&c.t(), &c.cheb_s(3))));
    }

    #[test]
    fn order_of_cache_fill_does_not_matter() {
        let a = ctx();
        let b = ctx();
        let _ = a.cluster_var(-4);
        let _ = a.cluster_var(6);
        for m in (-4..=6).rev() {
            assert_eq!(a.cluster_var(m), b.cluster_var(m));
        }
        let _ = a.cheb_s(5);
        assert_eq!(a.cheb_s(3), b.cheb_s(3));
    }

    #[test]
    fn x_minus_one_shape() {
        let c = ctx();
        let xm1 = c.cluster_var(-1);
        // 5 integer terms over 4 monomials; the zero-subspace stratum sits at
        // -(I-R')(1,2) and the componentwise-minimal term at -(1,2).
        assert_eq!(xm1.weight(), 5);
        assert_eq!(xm1.len(), 4);
        assert!(xm1.coeff(&ExpVec::from([3, -2, 1, 2])).is_one());
        assert!(xm1.coeff(&ExpVec::from([-1, -2, 1, 0])).is_one());
        assert_eq!(xm1.coeff(&ExpVec::from([1, -2, 1, 1])), VPoly::from_terms([(-1, 1), (1, 1)]));
    }

    #[test]
    fn cluster_monomials_are_bar_invariant() {
        let c = ctx();
        for m in -2..=3 {
            for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)] {
                assert!(c.cluster_monomial(m, a, b).is_bar_invariant(), "m={m} a={a} b={b}");
            }
        }
    }

    #[test]
    fn classical_mode_commutes() {
        let c = KronContext::classical();
        let a = c.eval(&(x(-2) * x(3)));
        let b = c.eval(&(x(3) * x(-2)));
        assert_eq!(a, b);
        assert_eq!(c.eval(&qh(5)), TorusElement::one(4));
        assert_eq!(c.eval(&mono([1, 0, 0, 0])), *c.cluster_var(1));
        let q = ctx();
        assert_eq!(q.cluster_var(-3).specialize_q1(), c.cluster_var(-3).specialize_q1());
    }
}
