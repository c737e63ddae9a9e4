//! Evaluation of expression trees in a ring.
//!
//! Symbols resolve to the ring's generators (which already include lifted generators of
//! nested base rings), and in a free ring also to words spelled from its alphabet, so `uvx`
//! is the word `u·v·x`. Bare integers stay pending until they meet a ring element.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use orelab_core::free::FreeRing;
use orelab_core::lazy::{theta_mod, UMatRing};
use orelab_core::ore::OreRing;
use orelab_core::ring::{MatrixRing, PolyRing, SequenceRing};
use orelab_core::series::SkewSeriesRing;
use orelab_core::{Element, Error, Ring, Value};

use crate::ast::{Ast, BinOp, Func, SeqLit, SeqTail};
use crate::parser::parse;
use crate::CliError;

/// A ring plus the precision used by `theta`.
#[derive(Clone, Debug)]
pub struct Context {
    ring: Ring,
    prec: usize,
}

#[derive(Clone, Debug)]
enum EvalVal {
    Int(BigInt),
    Elem(Element),
}

impl Context {
    pub fn new(ring: Ring) -> Self {
        Context { ring, prec: 8 }
    }

    pub fn with_precision(mut self, prec: usize) -> Self {
        self.prec = prec;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn sub(&self, ring: Ring) -> Context {
        Context {
            ring,
            prec: self.prec,
        }
    }

    /// First binding wins, so `x` in `Ore(Poly(Z,x);..;var=x)` is the Ore variable.
    fn bindings(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        for (name, v) in self.ring.generators() {
            out.entry(name).or_insert(v);
        }
        out
    }

    fn symbol(&self, name: &str) -> Result<Value, CliError> {
        if let Some(v) = self.bindings().remove(name) {
            return Ok(v);
        }
        if let Some(f) = self.ring.downcast::<FreeRing>() {
            if f.word(name).is_ok() {
                return Ok(f.element(&[(1, name)])?);
            }
        }
        Err(CliError::Unbound(name.to_string()))
    }

    fn resolves(&self, name: &str) -> bool {
        if self.symbol(name).is_ok() {
            return true;
        }
        base_of(&self.ring).is_some_and(|b| self.sub(b).resolves(name))
    }

    fn check_bound(&self, ast: &Ast) -> Result<(), CliError> {
        match ast {
            Ast::Sym(s) if !self.resolves(s) => Err(CliError::Unbound(s.clone())),
            Ast::Neg(a) | Ast::Pow(a, _) | Ast::Call(_, a) => self.check_bound(a),
            Ast::Bin(_, l, r) => {
                self.check_bound(l)?;
                self.check_bound(r)
            }
            Ast::List(items) | Ast::Series(items, _) => {
                items.iter().try_for_each(|a| self.check_bound(a))
            }
            _ => Ok(()),
        }
    }

    fn elem(&self, v: Value) -> Result<Element, CliError> {
        Ok(Element::new(self.ring.clone(), v)?)
    }

    fn lift(&self, v: EvalVal) -> Result<Element, CliError> {
        match v {
            EvalVal::Int(n) => self.elem(self.ring.from_int(&n)),
            EvalVal::Elem(e) => {
                e.ring().ensure_same(&self.ring)?;
                Ok(e)
            }
        }
    }

    /// Evaluates every item of a literal in the base ring.
    fn items(&self, base: &Ring, items: &[Ast]) -> Result<Vec<Value>, CliError> {
        let ctx = self.sub(base.clone());
        items
            .iter()
            .map(|a| Ok(ctx.lift(ctx.eval_val(a)?)?.into_value()))
            .collect()
    }

    fn seq(&self, seqs: &SequenceRing, lit: &SeqLit) -> Result<Value, CliError> {
        let b = seqs.base();
        let ints = |v: &[BigInt]| v.iter().map(|n| b.from_int(n)).collect::<Vec<_>>();
        let period = match &lit.tail {
            SeqTail::Const(c) => vec![b.from_int(c)],
            SeqTail::Period(p) => ints(p),
        };
        Ok(seqs.value(ints(&lit.prefix), period)?)
    }

    fn literal(&self, ast: &Ast) -> Result<Value, CliError> {
        let r = &self.ring;
        let unsupported = || {
            CliError::Eval(format!("{} literals are not elements of {}", kind(ast), r.id()))
        };
        match ast {
            Ast::List(items) => {
                if let Some(o) = r.downcast::<OreRing>() {
                    Ok(o.poly(self.items(o.base(), items)?))
                } else if let Some(p) = r.downcast::<PolyRing>() {
                    Ok(p.from_coeffs(self.items(p.base(), items)?))
                } else if let Some(s) = r.downcast::<SkewSeriesRing>() {
                    if items.len() > s.precision() {
                        return Err(Error::PrecisionMismatch {
                            left: items.len(),
                            right: s.precision(),
                        }
                        .into());
                    }
                    Ok(s.series(self.items(s.base(), items)?))
                } else if let Some(m) = r.downcast::<MatrixRing>() {
                    self.matrix(m, items)
                } else {
                    Err(unsupported())
                }
            }
            Ast::Series(items, n) => {
                let s = r.downcast::<SkewSeriesRing>().ok_or_else(unsupported)?;
                if *n != s.precision() {
                    return Err(Error::PrecisionMismatch {
                        left: *n,
                        right: s.precision(),
                    }
                    .into());
                }
                self.sub(r.clone()).literal(&Ast::List(items.clone()))
            }
            Ast::Seq(lit) => {
                let s = r.downcast::<SequenceRing>().ok_or_else(unsupported)?;
                self.seq(s, lit)
            }
            Ast::Band(bands) => {
                let u = r.downcast::<UMatRing>().ok_or_else(unsupported)?;
                let mut out = BTreeMap::new();
                for (d, lit) in bands {
                    let Value::Seq(s) = self.seq(u.sequences(), lit)? else {
                        unreachable!("sequence rings produce sequences")
                    };
                    if out.insert(*d, s).is_some() {
                        return Err(CliError::Eval(format!("band {d} given twice")));
                    }
                }
                Ok(u.banded(out))
            }
            _ => unreachable!("not a literal"),
        }
    }

    /// Nested rows `[[a, b], [c, d]]` or a flat row-major list.
    fn matrix(&self, m: &MatrixRing, items: &[Ast]) -> Result<Value, CliError> {
        let k = m.size();
        let flat: Vec<Ast> = if items.len() == k && items.iter().all(|a| matches!(a, Ast::List(_))) {
            let mut out = Vec::new();
            for row in items {
                let Ast::List(row) = row else { unreachable!() };
                if row.len() != k {
                    return Err(Error::Dimension(format!("row of length {} in a {k}x{k} matrix", row.len())).into());
                }
                out.extend(row.iter().cloned());
            }
            out
        } else {
            items.to_vec()
        };
        if flat.len() != k * k {
            return Err(Error::Dimension(format!("{} entries for a {k}x{k} matrix", flat.len())).into());
        }
        let vals = self.items(m.base(), &flat)?;
        Ok(m.from_fn(|i, j| vals[i * k + j].clone()))
    }

    fn call(&self, func: Func, arg: EvalVal) -> Result<EvalVal, CliError> {
        if func == Func::Theta {
            let e = self.lift(arg)?;
            let p = theta_mod(e.ring(), e.value(), self.prec)?;
            return Ok(EvalVal::Elem(Element::new(p.ring().clone(), p.value())?));
        }
        let e = match arg {
            EvalVal::Int(n) => self.elem(self.ring.from_int(&n))?,
            EvalVal::Elem(e) => e,
        };
        let r = e.ring().clone();
        let v = e.value();
        let out = match func {
            Func::Sigma | Func::Delta => {
                if let Some(o) = r.downcast::<OreRing>() {
                    let c = constant_coeff(o, v)?;
                    let image = if func == Func::Sigma {
                        o.sigma().apply(&c)?
                    } else {
                        o.delta().apply(&c)?
                    };
                    o.constant(image)
                } else if let (Func::Sigma, Some(s)) = (func, r.downcast::<SkewSeriesRing>()) {
                    let coeffs = v.as_list().unwrap_or_default();
                    let mapped = coeffs
                        .iter()
                        .map(|c| s.sigma().apply(c))
                        .collect::<orelab_core::Result<Vec<_>>>()?;
                    s.series(mapped)
                } else if let (Func::Sigma, Some(u)) = (func, r.downcast::<UMatRing>()) {
                    u.shift_sigma(v)?
                } else {
                    return Err(CliError::Eval(format!(
                        "{} is not defined on {}",
                        func.name(),
                        r.id()
                    )));
                }
            }
            Func::Transpose => {
                let m = r.downcast::<MatrixRing>().ok_or_else(|| {
                    CliError::Eval(format!("transpose needs a matrix ring, got {}", r.id()))
                })?;
                m.from_fn(|i, j| m.entry(v, j, i).clone())
            }
            Func::Theta => unreachable!(),
        };
        Ok(EvalVal::Elem(Element::new(r, out)?))
    }

    fn eval_val(&self, ast: &Ast) -> Result<EvalVal, CliError> {
        Ok(match ast {
            Ast::Int(n) => EvalVal::Int(n.clone()),
            Ast::Sym(s) => EvalVal::Elem(self.elem(self.symbol(s)?)?),
            Ast::Neg(a) => match self.eval_val(a)? {
                EvalVal::Int(n) => EvalVal::Int(-n),
                EvalVal::Elem(e) => EvalVal::Elem(e.neg()?),
            },
            Ast::Bin(op, l, r) => {
                let (l, r) = (self.eval_val(l)?, self.eval_val(r)?);
                match (l, r) {
                    (EvalVal::Int(a), EvalVal::Int(b)) => EvalVal::Int(match op {
                        BinOp::Add => a + b,
                        BinOp::Sub => a - b,
                        BinOp::Mul => a * b,
                    }),
                    (l, r) => {
                        let (l, r) = match (l, r) {
                            (EvalVal::Int(n), EvalVal::Elem(e)) => (int_like(&e, &n)?, e),
                            (EvalVal::Elem(e), EvalVal::Int(n)) => {
                                let c = int_like(&e, &n)?;
                                (e, c)
                            }
                            (EvalVal::Elem(a), EvalVal::Elem(b)) => (a, b),
                            (EvalVal::Int(_), EvalVal::Int(_)) => unreachable!(),
                        };
                        EvalVal::Elem(match op {
                            BinOp::Add => l.add(&r)?,
                            BinOp::Sub => l.sub(&r)?,
                            BinOp::Mul => l.mul(&r)?,
                        })
                    }
                }
            }
            Ast::Pow(a, n) => match self.eval_val(a)? {
                EvalVal::Int(b) => EvalVal::Int(b.pow(*n)),
                EvalVal::Elem(e) => EvalVal::Elem(e.pow(*n as usize)?),
            },
            Ast::Call(f, a) => self.call(*f, self.eval_val(a)?)?,
            Ast::List(_) | Ast::Series(..) | Ast::Seq(_) | Ast::Band(_) => {
                EvalVal::Elem(self.elem(self.literal(ast)?)?)
            }
        })
    }

    /// Evaluates `ast`; the result lives in the context ring unless `theta` moved it.
    pub fn eval(&self, ast: &Ast) -> Result<Element, CliError> {
        self.check_bound(ast)?;
        match self.eval_val(ast)? {
            EvalVal::Int(n) => self.elem(self.ring.from_int(&n)),
            EvalVal::Elem(e) => Ok(e),
        }
    }

    pub fn eval_str(&self, text: &str) -> Result<Element, CliError> {
        self.eval(&parse_expression(text, self)?)
    }
}

fn int_like(e: &Element, n: &BigInt) -> Result<Element, CliError> {
    Ok(Element::new(e.ring().clone(), e.ring().from_int(n))?)
}

fn kind(ast: &Ast) -> &'static str {
    match ast {
        Ast::Series(..) => "series",
        Ast::Seq(_) => "sequence",
        Ast::Band(_) => "band",
        _ => "list",
    }
}

fn constant_coeff(o: &OreRing, v: &Value) -> Result<Value, CliError> {
    match v.as_list().unwrap_or_default() {
        [] => Ok(o.base().zero()),
        [c] => Ok(c.clone()),
        _ => Err(CliError::Eval(
            "sigma and delta of an Ore ring apply to constants only".into(),
        )),
    }
}

fn base_of(ring: &Ring) -> Option<Ring> {
    if let Some(o) = ring.downcast::<OreRing>() {
        Some(o.base().clone())
    } else if let Some(p) = ring.downcast::<PolyRing>() {
        Some(p.base().clone())
    } else if let Some(s) = ring.downcast::<SkewSeriesRing>() {
        Some(s.base().clone())
    } else {
        ring.downcast::<MatrixRing>().map(|m| m.base().clone())
    }
}

/// Parses `text` and checks that every symbol is bound in `ctx`.
pub fn parse_expression(text: &str, ctx: &Context) -> Result<Ast, CliError> {
    let ast = parse(text)?;
    ctx.check_bound(&ast)?;
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use orelab_core::ore::{ore_mul, OrePoly};
    use orelab_core::ring::FULL;
    use orelab_core::make_ring;

    use super::*;

    fn ore(base: &str, sigma: &str, delta: Option<&str>) -> Context {
        Context::new(OreRing::from_names(&make_ring(base).unwrap(), sigma, delta).unwrap())
    }

    fn same(a: &Element, b: &Element) -> bool {
        a.eq_within(b, FULL).unwrap()
    }

    #[test]
    fn weyl_commutator() {
        for base in ["Poly(Z,y)", "Poly(Z/2,y)"] {
            let w = ore(base, "id", Some("d_dy"));
            assert!(same(&w.eval_str("x*y - y*x").unwrap(), &w.eval_str("1").unwrap()));
        }
    }

    #[test]
    fn monomial_quotient_kills_xu() {
        let s = Context::new(make_ring("Free(u,v,x|xu=0,xv=0)").unwrap());
        assert!(s.eval_str("x*u").unwrap().is_zero(FULL));
        assert!(s.eval_str("xu").unwrap().is_zero(FULL));
        assert!(!s.eval_str("u*x").unwrap().is_zero(FULL));
        assert!(same(&s.eval_str("u*x").unwrap(), &s.eval_str("ux").unwrap()));
    }

    #[test]
    fn square_matches_ore_mul() {
        for (base, sigma, delta) in [
            ("Poly(Z,y)", "y_negate", None),
            ("Poly(Z,y)", "const_term", Some("coeff_shift")),
            ("M2(Z/2)", "inner", None),
        ] {
            let ctx = ore(base, sigma, delta);
            let r = ctx.ring().clone();
            let o = r.downcast::<OreRing>().unwrap();
            let p = OrePoly::new(&r, vec![o.base().one(), o.base().one()]).unwrap();
            let want = ore_mul(&p, &p).unwrap();
            let got = ctx.eval_str("(x + 1)^2").unwrap();
            assert_eq!(OrePoly::from_value(&r, got.value()).unwrap(), want);
            // x*r = sigma(r)*x + delta(r) for the base generators
            for (name, _) in o.base().generators() {
                let lhs = ctx.eval_str(&format!("x*{name}")).unwrap();
                let rhs = ctx.eval_str(&format!("sigma({name})*x + delta({name})")).unwrap();
                assert!(same(&lhs, &rhs), "{name} in {}", r.id());
            }
        }
    }

    #[test]
    fn products_are_not_reordered() {
        let w = ore("Poly(Z,y)", "id", Some("d_dy"));
        assert!(!same(&w.eval_str("x*y").unwrap(), &w.eval_str("y*x").unwrap()));
    }

    #[test]
    fn pending_integers() {
        let z4 = Context::new(make_ring("Z/4").unwrap());
        assert!(z4.eval_str("2^2 + 4*3").unwrap().is_zero(FULL));
        let w = ore("Poly(Z,y)", "id", Some("d_dy"));
        assert!(same(&w.eval_str("2*x - x*2").unwrap(), &w.eval_str("0").unwrap()));
    }

    #[test]
    fn literals_in_their_rings() {
        let zy = Context::new(make_ring("Poly(Z,y)").unwrap());
        assert!(same(&zy.eval_str("[1, 0, 3]").unwrap(), &zy.eval_str("1 + 3*y^2").unwrap()));

        let m = Context::new(make_ring("M2(Z)").unwrap());
        let a = m.eval_str("[[1, 2], [3, 4]]").unwrap();
        assert!(same(&a, &m.eval_str("[1, 2, 3, 4]").unwrap()));
        assert!(same(&m.eval_str("transpose([[1, 2], [3, 4]])").unwrap(), &m.eval_str("[[1, 3], [2, 4]]").unwrap()));
        assert!(matches!(m.eval_str("[1, 2, 3]"), Err(CliError::Core(Error::Dimension(_)))));

        let s = Context::new(make_ring("Series(Z/4;sigma=id;prec=4)").unwrap());
        assert!(same(&s.eval_str("[1, 2] @ 4").unwrap(), &s.eval_str("1 + 2*x").unwrap()));
        assert!(matches!(s.eval_str("[1] @ 5"), Err(CliError::Core(Error::PrecisionMismatch { .. }))));

        let p = Context::new(make_ring("P(Z/2)").unwrap());
        let e = p.eval_str("prefix [1, 0] then period [1]").unwrap();
        assert!(same(&e, &p.eval_str("prefix [] then const 1 - prefix [0, 1] then const 0").unwrap()));

        let u = Context::new(make_ring("UMat(Z/2)").unwrap());
        assert!(same(&u.eval_str("band{1: prefix [] then const 1}").unwrap(), &u.eval_str("S").unwrap()));
        assert!(same(&u.eval_str("sigma(E)").unwrap(), &u.eval_str("band{0: prefix [1, 1] then const 0}").unwrap()));
    }

    #[test]
    fn theta_moves_to_the_series_ring() {
        let u = Context::new(make_ring("UMat(Z/2)").unwrap()).with_precision(4);
        let a = u.eval_str("theta(S*S)").unwrap();
        let b = u.eval_str("theta(S)*theta(S)").unwrap();
        assert!(same(&a, &b));
        assert_eq!(a.ring().id(), "Series(P(Z/2);sigma=shift;prec=4)");
    }

    #[test]
    fn binding_errors() {
        let zy = Context::new(make_ring("Poly(Z,y)").unwrap());
        assert!(matches!(parse_expression("y + t", &zy), Err(CliError::Unbound(s)) if s == "t"));
        assert!(matches!(zy.eval_str("sigma(y)"), Err(CliError::Eval(_))));
        assert!(matches!(zy.eval_str("prefix [] then const 1"), Err(CliError::Eval(_))));
        let ore = ore("Poly(Z,y)", "y_negate", None);
        assert!(matches!(ore.eval_str("sigma(x)"), Err(CliError::Eval(_))));
    }
}
