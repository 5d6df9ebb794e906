//! Human-readable polynomial text: `2*b1*b2^2 + 3*b2^2*b3 - b3`.

use super::{Int, Monomial, Poly, PolyError};

impl Poly {
    /// Renders terms in descending graded-lex order with 1-based variable
    /// names `{glyph}{i}`.
    pub fn to_text(&self, glyph: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("{glyph}{}", i + 1)),
                    _ => factors.push(format!("{glyph}{}^{e}", i + 1)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the text format. Any ASCII-letter glyph is accepted; the rank
    /// is `rank` if given, else the largest variable index seen.
    pub fn parse_text(s: &str, rank: Option<usize>) -> Result<Poly, PolyError> {
        let err = |msg: &str| PolyError::Parse(format!("{msg} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let at_boundary = matches!(ch, '+' | '-') && !matches!(prev, None | Some('+') | Some('-') | Some('*') | Some('^'));
            if at_boundary {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if matches!(ch, '+' | '-') && cur.is_empty() {
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        terms.push((neg, cur));

        let mut parsed: Vec<(Vec<(usize, u16)>, Int)> = Vec::new();
        let mut max_var = 0usize;
        for (neg, body) in terms {
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let mut coef = Int::one();
            let mut vars = Vec::new();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    let c: Int = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coef = &coef * &c;
                    continue;
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u16>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let digits_at = base.find(|c: char| c.is_ascii_digit()).ok_or_else(|| err("variable without index"))?;
                let (letters, idx) = base.split_at(digits_at);
                if letters.is_empty() || !letters.chars().all(|c| c.is_ascii_alphabetic()) {
                    return Err(err("bad variable name"));
                }
                let idx: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                if idx == 0 {
                    return Err(err("variable indices start at 1"));
                }
                max_var = max_var.max(idx);
                vars.push((idx - 1, exp));
            }
            if neg {
                coef = -&coef;
            }
            parsed.push((vars, coef));
        }
        let rank = match rank {
            Some(r) if r < max_var => return Err(err("variable index exceeds rank")),
            Some(r) => r,
            None => max_var,
        };
        let mut out = Poly::zero(rank);
        for (vars, c) in parsed {
            let mut m = Monomial::one(rank);
            for (i, e) in vars {
                m.0[i] += e;
            }
            out.add_term(m, &c);
        }
        Ok(out)
    }
}
