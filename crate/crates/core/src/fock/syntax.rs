//! Text form of states: `b(-2)^2 b(-1) |0>`, `(1/2*c) |0>`, `1_{1,2}`.

use std::fmt::Write;

use super::module::Fock;
use super::state::{Mode, Monomial, State};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalars::parse::parse_scalar_at;
use crate::scalars::Scalar;

impl Fock {
    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < m.word.len() {
            let x = m.word[i];
            let mut k = 1;
            while i + k < m.word.len() && m.word[i + k] == x {
                k += 1;
            }
            let _ = write!(out, "{}({})", self.algebra().generator(x.gen).name, x.n);
            if k > 1 {
                let _ = write!(out, "^{k}");
            }
            out.push(' ');
            i += k;
        }
        out.push_str(&self.render_vacuum(m.sector));
        out
    }

    fn render_vacuum(&self, sector: i64) -> String {
        match self.algebra().lattice() {
            Some(l) if sector != 0 => format!("1_{{{},{}}}", sector, l.n),
            _ => self.algebra().vacuum_label().to_string(),
        }
    }

    /// Canonical text of a state; `0` for the zero state.
    pub fn render(&self, s: &State) -> String {
        if s.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in s.iter().enumerate() {
            let (neg, coeff) = split_sign(c);
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if let Some(text) = coeff {
                out.push_str(&text);
                out.push(' ');
            }
            out.push_str(&self.render_monomial(m));
        }
        out
    }

    /// Parse a state and normal order it.
    pub fn parse_state(&self, src: &str) -> Result<State> {
        let mut p = StateParser { src, pos: 0, fock: self };
        let s = p.state()?;
        p.skip_ws();
        if p.pos < src.len() {
            return p.err("unexpected input");
        }
        Ok(s)
    }
}

/// Split a coefficient into a sign and the text of its magnitude, omitting
/// a unit magnitude. Parametric coefficients are parenthesized.
fn split_sign(c: &Scalar) -> (bool, Option<String>) {
    match c.as_rational() {
        Some(r) => {
            let neg = r < &num_traits::Zero::zero();
            let a = if neg { -r.clone() } else { r.clone() };
            if num_traits::One::is_one(&a) {
                (neg, None)
            } else {
                (neg, Some(a.to_string()))
            }
        }
        None => {
            let text = c.to_string();
            if text.chars().all(|x| x.is_alphanumeric() || "_^*".contains(x)) {
                (false, Some(text))
            } else {
                (false, Some(format!("({text})")))
            }
        }
    }
}

struct StateParser<'a> {
    src: &'a str,
    pos: usize,
    fock: &'a Fock,
}

impl<'a> StateParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let t = self.rest();
        self.pos += t.len() - t.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn state(&mut self) -> Result<State> {
        let mut acc = State::zero();
        let mut sign = Scalar::one();
        if self.eat("-") {
            sign = Scalar::from_int(-1);
        } else {
            self.eat("+");
        }
        if self.rest().trim() == "0" {
            self.pos = self.src.len();
            return Ok(State::zero());
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            if self.eat("+") {
                sign = Scalar::one();
            } else if self.eat("-") {
                sign = Scalar::from_int(-1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<State> {
        let coeff = self.coefficient()?;
        let mut factors: Vec<(Mode, usize)> = Vec::new();
        loop {
            match self.peek() {
                Some('|') => {
                    if !self.eat("|0>") {
                        return self.err("expected `|0>`");
                    }
                    return self.finish(coeff, factors, 0);
                }
                Some('1') if self.rest().starts_with("1_{") => {
                    let sector = self.lattice_vacuum()?;
                    return self.finish(coeff, factors, sector);
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    let name = self.ident().to_string();
                    if self.rest().starts_with('(') {
                        let gen = self.fock.algebra().gen_id(&name).map_err(|_| Error::Parse {
                            pos: start,
                            msg: format!("unknown generator `{name}`"),
                        })?;
                        self.pos += 1;
                        let n = self.half()?;
                        if !self.eat(")") {
                            return self.err("expected `)`");
                        }
                        let mut k = 1;
                        if self.rest().starts_with('^') {
                            self.pos += 1;
                            k = self.unsigned()?;
                        }
                        factors.push((Mode::new(gen, n), k));
                    } else if name == self.fock.algebra().vacuum_label() {
                        return self.finish(coeff, factors, 0);
                    } else {
                        self.pos = start;
                        return self.err(&format!("unknown vacuum or missing mode on `{name}`"));
                    }
                }
                _ => return self.err("expected a mode or a vacuum"),
            }
        }
    }

    fn finish(&self, coeff: Scalar, factors: Vec<(Mode, usize)>, sector: i64) -> Result<State> {
        if sector != 0 && self.fock.algebra().lattice().is_none() {
            return Err(Error::SectorMismatch);
        }
        let mut s = State::term(Monomial::sector_vacuum(sector), coeff);
        for (x, k) in factors.into_iter().rev() {
            for _ in 0..k {
                s = self.fock.apply(x, &s);
            }
        }
        Ok(s)
    }

    fn coefficient(&mut self) -> Result<Scalar> {
        let c = match self.peek() {
            Some('(') => {
                let open = self.pos;
                let close = matching_paren(self.src, open).ok_or_else(|| Error::Parse {
                    pos: open,
                    msg: "unbalanced `(`".into(),
                })?;
                let s = parse_scalar_at(&self.src[open + 1..close], open + 1)?;
                self.pos = close + 1;
                s
            }
            Some(c) if c.is_ascii_digit() && !self.rest().starts_with("1_{") => {
                let start = self.pos;
                let num = self.unsigned()?;
                let mut r = Scalar::from_int(num as i64);
                if self.rest().starts_with('/') {
                    self.pos += 1;
                    let den = self.unsigned()?;
                    if den == 0 {
                        self.pos = start;
                        return self.err("division by zero");
                    }
                    r = Scalar::from_ratio(num as i64, den as i64);
                }
                r
            }
            _ => return Ok(Scalar::one()),
        };
        self.eat("*");
        Ok(c)
    }

    fn lattice_vacuum(&mut self) -> Result<i64> {
        self.pos += 3;
        let m = self.signed()?;
        if !self.eat(",") {
            return self.err("expected `,`");
        }
        let at = self.pos;
        let n = self.signed()?;
        if !self.eat("}") {
            return self.err("expected `}`");
        }
        match self.fock.algebra().lattice() {
            Some(l) if l.n == n => Ok(m),
            Some(_) => {
                self.pos = at;
                self.err("lattice vacuum does not match the algebra's N")
            }
            None => Err(Error::SectorMismatch),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        for (i, c) in self.rest().char_indices() {
            if !(c.is_alphanumeric() || c == '_' || c == '*') {
                self.pos = start + i;
                return &self.src[start..self.pos];
            }
        }
        self.pos = self.src.len();
        &self.src[start..]
    }

    fn unsigned(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return self.err("expected a number");
        }
        let v = self.rest()[..digits].parse().or_else(|_| self.err("number too large"))?;
        self.pos += digits;
        Ok(v)
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let v = self.unsigned()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn half(&mut self) -> Result<Half> {
        let start = self.pos;
        let v = self.signed()?;
        self.skip_ws();
        if self.rest().starts_with('/') {
            self.pos += 1;
            let d = self.unsigned()?;
            if d != 2 || v % 2 == 0 {
                self.pos = start;
                return self.err("mode must be a half-integer");
            }
            return Ok(Half::from_doubled(v));
        }
        Ok(Half::from_int(v))
    }
}

fn matching_paren(src: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in src[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}
