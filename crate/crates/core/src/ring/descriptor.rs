//! Ring descriptor strings.
//!
//! ```text
//! ring := "Z" | "Z/" nat | "Poly(" ring "," ident ")" | "M" nat "(" ring ")"
//!       | "P(" ring ")" | "Laurent(" ring ",prec=" nat ")" | "UMat(" ring ")"
//!       | "Free(" gen ("," gen)* ("|" word "=0" ("," word "=0")*)? (";deg=" nat)? ")"
//!       | "Series(" ring ";sigma=" morph ";prec=" nat ")"
//!       | "Ore(" ring ";sigma=" morph (";delta=" morph)? (";var=" ident)? ")"
//! ```
//!
//! `morph` is a catalog name such as `shift` or `entrywise(inner)`.

use num_bigint::BigInt;

use super::{Integers, IntegersMod, LaurentRing, MatrixRing, PolyRing, Ring, SequenceRing};
use crate::error::{Error, Result};
use crate::free::{FreeRing, RewriteSystem};
use crate::lazy::UMatRing;
use crate::morphism::{builtin_morphisms, resolve_pair};
use crate::ore::{LawCheckConfig, OreRing};
use crate::series::SkewSeriesRing;

pub fn make_ring(spec: &str) -> Result<Ring> {
    let mut p = Parser {
        src: spec.as_bytes(),
        pos: 0,
    };
    let ring = p.ring()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(ring)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::DescriptorParse {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_nat(&mut self) -> Result<usize> {
        let at = self.pos;
        let n = self.nat()?;
        usize::try_from(n).map_err(|_| Error::DescriptorParse {
            position: at,
            message: "number too large".into(),
        })
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.err("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn ring(&mut self) -> Result<Ring> {
        self.skip_ws();
        if self.eat("Poly(") {
            let base = self.ring()?;
            self.expect(",")?;
            let var = self.ident()?;
            self.expect(")")?;
            return Ok(Ring::new(PolyRing::new(base, var)));
        }
        if self.eat("P(") {
            let base = self.ring()?;
            self.expect(")")?;
            return Ok(Ring::new(SequenceRing::new(base)?));
        }
        if self.eat("Laurent(") {
            let base = self.ring()?;
            self.expect(",")?;
            self.expect("prec")?;
            self.expect("=")?;
            let n = self.small_nat()?;
            self.expect(")")?;
            return Ok(Ring::new(LaurentRing::new(base, n)?));
        }
        if self.eat("UMat(") {
            let base = self.ring()?;
            self.expect(")")?;
            return Ok(Ring::new(UMatRing::new(base)?));
        }
        if self.eat("Series(") {
            let base = self.ring()?;
            let sigma = self.keyed_morph("sigma")?;
            self.expect(";")?;
            self.expect("prec")?;
            self.expect("=")?;
            let prec = self.small_nat()?;
            self.expect(")")?;
            let sigma = builtin_morphisms(&sigma, &base)?.into_endo()?;
            return SkewSeriesRing::new(sigma, prec);
        }
        if self.eat("Ore(") {
            let base = self.ring()?;
            let sigma = self.keyed_morph("sigma")?;
            let mut delta = None;
            let mut var = "x".to_string();
            while self.eat(";") {
                if self.eat("delta") {
                    self.expect("=")?;
                    delta = Some(self.morph()?);
                } else if self.eat("var") {
                    self.expect("=")?;
                    var = self.ident()?;
                } else {
                    return Err(self.err("expected `delta=` or `var=`"));
                }
            }
            self.expect(")")?;
            let (s, d) = resolve_pair(&base, &sigma, delta.as_deref())?;
            return OreRing::with_config(s, d, &var, LawCheckConfig::default());
        }
        if self.eat("Free(") {
            return self.free();
        }
        if self.eat("M") {
            let k = self.small_nat()?;
            if k == 0 {
                return Err(Error::UnsupportedParameter("matrix size must be ≥ 1".into()));
            }
            self.expect("(")?;
            let base = self.ring()?;
            self.expect(")")?;
            return Ok(Ring::new(MatrixRing::new(base, k)));
        }
        if self.eat("Z") {
            if self.eat("/") {
                let n = self.nat()?;
                return Ok(Ring::new(IntegersMod::new(n)?));
            }
            return Ok(Ring::new(Integers));
        }
        Err(self.err("unknown ring form"))
    }

    fn keyed_morph(&mut self, key: &str) -> Result<String> {
        self.expect(";")?;
        self.expect(key)?;
        self.expect("=")?;
        self.morph()
    }

    /// A morphism name, possibly with balanced parentheses.
    fn morph(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(&c) = self.src.get(self.pos) {
            match c {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                b';' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a morphism name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .trim()
            .to_string())
    }

    fn free(&mut self) -> Result<Ring> {
        let mut gens = Vec::new();
        loop {
            let g = self.ident()?;
            if g.chars().count() != 1 {
                return Err(self.err("free generators must be single letters"));
            }
            gens.push(g.chars().next().unwrap());
            if !self.eat(",") {
                break;
            }
        }
        let mut zero_words = Vec::new();
        if self.eat("|") {
            loop {
                let w = self.ident()?;
                self.expect("=")?;
                self.expect("0")?;
                zero_words.push(w);
                if !self.eat(",") {
                    break;
                }
            }
        }
        let mut bound = None;
        if self.eat(";") {
            self.expect("deg")?;
            self.expect("=")?;
            bound = Some(self.small_nat()?);
        }
        self.expect(")")?;
        let rules = RewriteSystem::monomial(&gens, &zero_words)?;
        let mut ring = FreeRing::new(gens, rules)?;
        if let Some(b) = bound {
            ring = ring.with_degree_bound(b);
        }
        Ok(Ring::new(ring))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capability_flags() {
        let cases = [
            ("Z", false, true),
            ("Z/4", true, true),
            ("Poly(Z,y)", false, true),
            ("M2(Z/2)", true, true),
            ("M3(Z/4)", true, true),
            ("P(Z/2)", false, false),
            ("Laurent(Z/3,prec=5)", false, false),
            ("UMat(Z)", false, false),
            ("Free(u,v)", false, true),
        ];
        for (spec, enumerable, exact) in cases {
            let c = make_ring(spec).unwrap().capabilities();
            assert_eq!(c.enumerable, enumerable, "{spec}");
            assert_eq!(c.exact_equality, exact, "{spec}");
        }
    }

    #[test]
    fn descriptors_roundtrip() {
        for spec in [
            "Z",
            "Z/4",
            "Poly(Z,y)",
            "M2(Z/2)",
            "P(Z/2)",
            "Free(u,v)",
            "Free(u,v,x|xu=0,xv=0)",
            "Free(a,b;deg=3)",
            "Laurent(Z/7,prec=8)",
            "UMat(Z/4)",
            "Poly(M2(Z/3),t)",
            "Series(Z/4;sigma=id;prec=8)",
            "Series(M2(Z/2);sigma=entrywise(id);prec=4)",
            "Ore(Poly(Z,y);sigma=const_term;delta=coeff_shift;var=x)",
            "Ore(Poly(Z,y);sigma=id;delta=d_dy;var=x)",
        ] {
            assert_eq!(make_ring(spec).unwrap().id(), spec);
        }
    }

    #[test]
    fn cardinalities() {
        assert_eq!(make_ring("Z/4").unwrap().elements().unwrap().len(), 4);
        assert_eq!(make_ring("M2(Z/2)").unwrap().elements().unwrap().len(), 16);
    }

    #[test]
    fn malformed_specs() {
        assert!(matches!(make_ring("Z/0"), Err(Error::UnsupportedParameter(_))));
        assert!(matches!(make_ring("M0(Z)"), Err(Error::UnsupportedParameter(_))));
        assert!(matches!(make_ring("Q"), Err(Error::DescriptorParse { .. })));
        assert!(matches!(make_ring("Poly(Z,)"), Err(Error::DescriptorParse { .. })));
        assert!(matches!(make_ring("Z/4)"), Err(Error::DescriptorParse { .. })));
        assert!(matches!(make_ring("Laurent(Z,prec=0)"), Err(Error::UnsupportedParameter(_))));
        assert!(make_ring("Free(u,v|uu=1)").is_err());
        assert!(matches!(
            make_ring("Ore(Poly(Z,y);sigma=id;delta=coeff_shift)"),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            make_ring("Series(Z;sigma=nope;prec=3)"),
            Err(Error::UnknownMorphism(_))
        ));
    }

    #[test]
    fn sequence_ring_is_windowed() {
        let p = make_ring("P(Z/2)").unwrap();
        let c = p.capabilities();
        assert!(c.windowed_equality && !c.exact_equality);
    }
}
