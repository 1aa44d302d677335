//! Product-of-arc-variables encoding of a multigraph.
//!
//! A factor `x_{ij}` stands for one arc from node `i` to node `j`; repeated
//! factors encode parallel arcs. The empty product is written `1` and
//! encodes the null multigraph.
//!
//! Accepted lexemes, freely mixed and separated by spaces or tabs:
//!
//! ```text
//! monomial := "1" | factor (ws factor)* ;
//! factor   := "x" digit digit | "x_{" int [","] int "}" | "x[" int "," int "]" ;
//! ```
//!
//! In the braced form without a comma each name is a single digit.

use std::fmt;
use std::str::FromStr;

use crate::error::{DegreeDeficit, Error, Result};
use crate::matrix::{ArcMatrix, Degree};

/// Sorted multiset of `(source, target)` factors with 1-based node names.
///
/// Equality and hashing ignore `p_hint`.
#[derive(Debug, Clone, Default)]
pub struct Monomial {
    factors: Vec<(usize, usize)>,
    p_hint: Option<usize>,
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for Monomial {}

impl std::hash::Hash for Monomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// `x12`; node names must be at most 9.
    #[default]
    Compact,
    /// `x_{12}`, or `x_{10,3}` once a name exceeds 9.
    Braced,
    /// `x[1,2]`.
    Bracket,
}

impl Monomial {
    /// The constant `1`.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Builds a monomial from 1-based factors, normalizing their order.
    pub fn from_factors(mut factors: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(i, j)) = factors.iter().find(|&&(i, j)| i == 0 || j == 0) {
            return Err(Error::Usage(format!("node names are 1-based, got factor ({i},{j})")));
        }
        factors.sort_unstable();
        Ok(Monomial { factors, p_hint: None })
    }

    pub fn with_p_hint(mut self, p: usize) -> Self {
        self.p_hint = Some(p);
        self
    }

    pub fn p_hint(&self) -> Option<usize> {
        self.p_hint
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Largest node name mentioned, or 0 for the constant.
    pub fn max_node(&self) -> usize {
        self.factors.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser { src: text.as_bytes(), pos: 0 }.monomial()
    }

    pub fn print(&self, style: Style) -> Result<String> {
        if self.factors.is_empty() {
            return Ok("1".to_string());
        }
        let mut out = String::with_capacity(self.factors.len() * 4);
        for (k, &(i, j)) in self.factors.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            match style {
                Style::Compact => {
                    if i > 9 || j > 9 {
                        return Err(Error::Style { node: i.max(j) });
                    }
                    out.push_str(&format!("x{i}{j}"));
                }
                Style::Braced if i > 9 || j > 9 => out.push_str(&format!("x_{{{i},{j}}}")),
                Style::Braced => out.push_str(&format!("x_{{{i}{j}}}")),
                Style::Bracket => out.push_str(&format!("x[{i},{j}]")),
            }
        }
        Ok(out)
    }

    /// Per-node deficits of this monomial against `(p, d)`.
    pub fn degree_deficit(&self, p: usize, d: Degree) -> Result<DegreeDeficit> {
        let d = i64::from(d.get());
        let mut out_deficit = vec![d; p];
        let mut in_deficit = vec![d; p];
        for &(i, j) in &self.factors {
            if i > p || j > p {
                return Err(Error::Dimension { expected: p, found: i.max(j) });
            }
            out_deficit[i - 1] -= 1;
            in_deficit[j - 1] -= 1;
        }
        Ok(DegreeDeficit {
            out_deficit,
            in_deficit,
            factor_count: self.factors.len(),
            expected_factors: p * d as usize,
        })
    }

    /// Arc matrix of this monomial, validated as `d`-regular on `p` nodes.
    pub fn to_matrix(&self, p: usize, d: Degree) -> Result<ArcMatrix> {
        let deficit = self.degree_deficit(p, d)?;
        if deficit.factor_count != deficit.expected_factors
            || deficit.out_deficit.iter().chain(&deficit.in_deficit).any(|&x| x != 0)
        {
            return Err(Error::Degree(deficit));
        }
        let mut a = ArcMatrix::zeros(p);
        for &(i, j) in &self.factors {
            a.set(i - 1, j - 1, a.get(i - 1, j - 1) + 1);
        }
        Ok(a)
    }

    pub fn from_matrix(a: &ArcMatrix) -> Self {
        let mut factors = Vec::with_capacity(a.arc_count() as usize);
        for (i, row) in a.rows().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                factors.extend(std::iter::repeat_n((i + 1, j + 1), usize::from(k)));
            }
        }
        // row-major emission is already sorted
        Monomial { factors, p_hint: Some(a.p()) }
    }

    /// Adds one factor, keeping the normal form.
    pub fn insert(&mut self, factor: (usize, usize)) {
        let at = self.factors.partition_point(|f| *f <= factor);
        self.factors.insert(at, factor);
    }
}

pub fn parse_monomial(text: &str) -> Result<Monomial> {
    Monomial::parse(text)
}

pub fn print_monomial(m: &Monomial, style: Style) -> Result<String> {
    m.print(style)
}

pub fn monomial_to_matrix(m: &Monomial, p: usize, d: Degree) -> Result<ArcMatrix> {
    m.to_matrix(p, d)
}

pub fn matrix_to_monomial(a: &ArcMatrix) -> Monomial {
    Monomial::from_matrix(a)
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Monomial::parse(s)
    }
}

/// Prints in compact style when possible, bracket style otherwise.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let style = if self.max_node() > 9 { Style::Bracket } else { Style::Compact };
        f.write_str(&self.print(style).map_err(|_| fmt::Error)?)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: at, message: message.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(self.pos, format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(self.pos, format!("expected '{}', found end of input", c as char)),
        }
    }

    fn digit(&mut self) -> Result<usize> {
        match self.peek() {
            Some(c @ b'0'..=b'9') => {
                self.pos += 1;
                Ok(usize::from(c - b'0'))
            }
            _ => self.err(self.pos, "expected a digit"),
        }
    }

    fn int(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a node number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| self.err(start, "node number too large"))
    }

    fn node(&self, at: usize, v: usize) -> Result<usize> {
        if v == 0 {
            self.err(at, "node names start at 1")
        } else {
            Ok(v)
        }
    }

    fn factor(&mut self) -> Result<(usize, usize)> {
        let start = self.pos;
        self.expect(b'x')?;
        let (i, j) = match self.peek() {
            Some(b'0'..=b'9') => {
                let i = self.digit()?;
                let j = self.digit()?;
                (i, j)
            }
            Some(b'_') => {
                self.pos += 1;
                self.expect(b'{')?;
                let first = self.pos;
                let i = self.int()?;
                let ij = if self.peek() == Some(b',') {
                    self.pos += 1;
                    (i, self.int()?)
                } else if self.pos - first == 2 {
                    (i / 10, i % 10)
                } else {
                    return self.err(first, "braced factor without a comma needs exactly two digits");
                };
                self.expect(b'}')?;
                ij
            }
            Some(b'[') => {
                self.pos += 1;
                let i = self.int()?;
                self.expect(b',')?;
                let j = self.int()?;
                self.expect(b']')?;
                (i, j)
            }
            _ => return self.err(self.pos, "expected a digit, '_{' or '[' after 'x'"),
        };
        match self.peek() {
            None | Some(b' ' | b'\t') => {}
            Some(b'^') => return self.err(self.pos, "exponents are written by repeating the factor"),
            Some(_) => return self.err(self.pos, "unexpected character after factor"),
        }
        Ok((self.node(start, i)?, self.node(start, j)?))
    }

    fn monomial(mut self) -> Result<Monomial> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            self.skip_ws();
            return match self.peek() {
                None => Ok(Monomial::one()),
                Some(_) => self.err(self.pos, "the constant 1 must stand alone"),
            };
        }
        let mut factors = Vec::new();
        loop {
            if self.peek().is_none() {
                if factors.is_empty() {
                    return self.err(self.pos, "empty monomial (write 1 for the constant)");
                }
                break;
            }
            factors.push(self.factor()?);
            self.skip_ws();
        }
        factors.sort_unstable();
        Ok(Monomial { factors, p_hint: None })
    }
}
