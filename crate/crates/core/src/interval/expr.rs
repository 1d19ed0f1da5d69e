use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use super::{ep_add, ep_div, ep_mul, ep_square, ep_sub, EndpointInterval};
use crate::{Error, Result};

/// A single-variable expression. Cloning shares the node, so a cloned
/// subexpression used twice forms a DAG and is evaluated once.
///
/// ```
/// use repro_interval::interval::Expr;
/// let x = Expr::var();
/// let f = x.square() - x.clone();
/// ```
#[derive(Clone, Debug)]
pub struct Expr(Rc<Node>);

#[derive(Debug)]
enum Node {
    Var,
    Const(f64),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Square(Expr),
    Neg(Expr),
}

/// How [`enclose_range`] evaluates the expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeMethod {
    /// Interval evaluation of the expression as written; overestimation O(r).
    Natural,
    /// First-order centered form `f(m) + f'(X)(X - m)`; overestimation O(r²).
    MeanValue,
}

impl Expr {
    pub fn var() -> Expr {
        Expr(Rc::new(Node::Var))
    }

    pub fn constant(c: f64) -> Expr {
        Expr(Rc::new(Node::Const(c)))
    }

    pub fn square(&self) -> Expr {
        Expr(Rc::new(Node::Square(self.clone())))
    }

    /// Quotient; supported by the natural extension only.
    pub fn div(&self, rhs: &Expr) -> Expr {
        Expr(Rc::new(Node::Div(self.clone(), rhs.clone())))
    }

    fn key(&self) -> *const Node {
        Rc::as_ptr(&self.0)
    }

    fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Natural interval extension over `x`.
    pub fn eval(&self, x: EndpointInterval) -> Result<EndpointInterval> {
        self.eval_memo(x, &mut HashMap::new())
    }

    fn eval_memo(
        &self,
        x: EndpointInterval,
        memo: &mut HashMap<*const Node, EndpointInterval>,
    ) -> Result<EndpointInterval> {
        if let Some(v) = memo.get(&self.key()) {
            return Ok(*v);
        }
        let v = match &*self.0 {
            Node::Var => x,
            Node::Const(c) => EndpointInterval::point(*c)?,
            Node::Add(a, b) => ep_add(a.eval_memo(x, memo)?, b.eval_memo(x, memo)?),
            Node::Sub(a, b) => ep_sub(a.eval_memo(x, memo)?, b.eval_memo(x, memo)?),
            Node::Mul(a, b) => ep_mul(a.eval_memo(x, memo)?, b.eval_memo(x, memo)?),
            Node::Div(a, b) => ep_div(a.eval_memo(x, memo)?, b.eval_memo(x, memo)?)?,
            Node::Square(a) => ep_square(a.eval_memo(x, memo)?),
            Node::Neg(a) => -a.eval_memo(x, memo)?,
        };
        memo.insert(self.key(), v);
        Ok(v)
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Result<Expr> {
        self.derive_memo(&mut HashMap::new())
    }

    fn derive_memo(&self, memo: &mut HashMap<*const Node, Expr>) -> Result<Expr> {
        if let Some(d) = memo.get(&self.key()) {
            return Ok(d.clone());
        }
        let d = match &*self.0 {
            Node::Var => Expr::constant(1.0),
            Node::Const(_) => Expr::constant(0.0),
            Node::Add(a, b) => sum(a.derive_memo(memo)?, b.derive_memo(memo)?),
            Node::Sub(a, b) => difference(a.derive_memo(memo)?, b.derive_memo(memo)?),
            Node::Mul(a, b) => sum(
                product(a.derive_memo(memo)?, b.clone()),
                product(a.clone(), b.derive_memo(memo)?),
            ),
            Node::Square(a) => product(product(Expr::constant(2.0), a.clone()), a.derive_memo(memo)?),
            Node::Neg(a) => negation(a.derive_memo(memo)?),
            Node::Div(..) => return Err(Error::UnsupportedExpression("division in a mean-value form")),
        };
        memo.insert(self.key(), d.clone());
        Ok(d)
    }
}

// Constructors that fold the zeros and ones produced by differentiation.

fn sum(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr(Rc::new(Node::Add(a, b))),
    }
}

fn difference(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (_, Some(0.0)) => a,
        (Some(0.0), _) => negation(b),
        _ => Expr(Rc::new(Node::Sub(a, b))),
    }
}

fn product(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(0.0), _) | (_, Some(0.0)) => Expr::constant(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr(Rc::new(Node::Mul(a, b))),
    }
}

fn negation(a: Expr) -> Expr {
    match a.as_const() {
        Some(0.0) => a,
        _ => Expr(Rc::new(Node::Neg(a))),
    }
}

macro_rules! binary_ops {
    ($($tr:ident $method:ident $node:ident),*) => {$(
        impl $tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr(Rc::new(Node::$node(self, rhs)))
            }
        }

        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.$method(rhs.clone())
            }
        }

        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.clone().$method(rhs)
            }
        }

        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.clone().$method(rhs.clone())
            }
        }

        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                self.$method(Expr::constant(rhs))
            }
        }

        impl $tr<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                self.clone().$method(Expr::constant(rhs))
            }
        }

        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::constant(self).$method(rhs)
            }
        }

        impl $tr<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::constant(self).$method(rhs.clone())
            }
        }
    )*};
}

binary_ops!(Add add Add, Sub sub Sub, Mul mul Mul);

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr(Rc::new(Node::Neg(self)))
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        -self.clone()
    }
}

/// Encloses `{f(x) : x ∈ X}`.
pub fn enclose_range(f: &Expr, x: EndpointInterval, method: RangeMethod) -> Result<EndpointInterval> {
    match method {
        RangeMethod::Natural => f.eval(x),
        RangeMethod::MeanValue => {
            let df = f.derivative()?;
            let m = EndpointInterval::point(x.midpoint())?;
            let fm = f.eval(m)?;
            let slope = df.eval(x)?;
            Ok(ep_add(fm, ep_mul(slope, ep_sub(x, m))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> EndpointInterval {
        EndpointInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn dependency_in_natural_extension() {
        let x = Expr::var();
        let product = &x * &x;
        let square = x.square();
        assert_eq!(enclose_range(&product, iv(-1.0, 2.0), RangeMethod::Natural).unwrap(), iv(-2.0, 4.0));
        assert_eq!(enclose_range(&square, iv(-1.0, 2.0), RangeMethod::Natural).unwrap(), iv(0.0, 4.0));
    }

    #[test]
    fn derivative_of_polynomial() {
        let x = Expr::var();
        // x³ - 2x has derivative 3x² - 2
        let f = x.square() * x.clone() - 2.0 * x.clone();
        let df = f.derivative().unwrap();
        for t in [-2.0, 0.0, 0.5, 3.0] {
            let p = EndpointInterval::point(t).unwrap();
            let v = df.eval(p).unwrap();
            assert!(v.contains(3.0 * t * t - 2.0), "{t}: {v:?}");
        }
        assert!(matches!(
            Expr::constant(4.0).derivative().unwrap().as_const(),
            Some(c) if c == 0.0
        ));
    }

    #[test]
    fn mean_value_is_tighter_on_small_boxes() {
        let x = Expr::var();
        let f = x.square() - x.clone();
        let r = 2f64.powi(-10);
        let dom = iv(0.5 - r, 0.5 + r);
        let natural = enclose_range(&f, dom, RangeMethod::Natural).unwrap();
        let centered = enclose_range(&f, dom, RangeMethod::MeanValue).unwrap();
        // exact range is [-1/4, -1/4 + r²]
        assert!(natural.contains(-0.25) && centered.contains(-0.25));
        assert!(centered.width() < natural.width() / 100.0);
    }

    #[test]
    fn division_only_in_natural_form() {
        let x = Expr::var();
        let f = Expr::constant(1.0).div(&x);
        assert_eq!(enclose_range(&f, iv(2.0, 4.0), RangeMethod::Natural).unwrap(), iv(0.25, 0.5));
        assert!(matches!(
            enclose_range(&f, iv(2.0, 4.0), RangeMethod::MeanValue),
            Err(Error::UnsupportedExpression(_))
        ));
        assert!(matches!(
            enclose_range(&f, iv(-1.0, 1.0), RangeMethod::Natural),
            Err(Error::ContainsZero)
        ));
    }

    #[test]
    fn shared_nodes_are_evaluated_once() {
        let x = Expr::var();
        let mut e = x.clone();
        // 2^64 leaves as a tree, 64 nodes as a DAG
        for _ in 0..64 {
            e = &e + &e;
        }
        let v = e.eval(iv(1.0, 1.0)).unwrap();
        assert_eq!(v, iv(2f64.powi(64), 2f64.powi(64)));
    }
}
