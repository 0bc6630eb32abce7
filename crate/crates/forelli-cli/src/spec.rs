//! Configuration grammar: complex literals `a+bi`, semicolon-separated
//! vertex lists, function specs (`modulus_sq`, `globevnik:k=3`,
//! `poly:<expr>`, `charspec:<path>`), and polynomial expressions.

use std::collections::BTreeMap;

use forelli_core::boundary::{BoundaryFunction, CharacterizedSpec};
use forelli_core::disc::PolyanalyticFunction;
use forelli_core::poly::{Poly2, Polynomial};
use forelli_core::{BallPoint, Complex};

/// Parse a complex literal: `0.3`, `-0.2i`, `0.3+0i`, `1-2.5i`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    // Split at a '+'/'-' that is not leading and not an exponent sign.
    let bytes = s.as_bytes();
    let mut split = None;
    for (idx, &b) in bytes.iter().enumerate().skip(1) {
        if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&s[..idx], &s[idx..]),
        None => {
            if s.ends_with('i') {
                ("0", s.as_str())
            } else {
                (s.as_str(), "+0i")
            }
        }
    };
    let re: f64 = re_str.parse().map_err(|_| format!("bad real part in '{s}'"))?;
    let im_body = im_str
        .strip_suffix('i')
        .ok_or_else(|| format!("imaginary part must end with 'i' in '{s}'"))?;
    let im: f64 = match im_body {
        "+" | "" => 1.0,
        "-" => -1.0,
        other => other.parse().map_err(|_| format!("bad imaginary part in '{s}'"))?,
    };
    Ok(Complex::new(re, im))
}

/// Parse `z1,z2; z1,z2; ...` into interior ball points.
pub fn parse_vertices(s: &str) -> Result<Vec<BallPoint>, String> {
    let mut out = Vec::new();
    for (i, chunk) in s.split(';').enumerate() {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let parts: Vec<&str> = chunk.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("vertex {i} must be 'z1,z2', got '{chunk}'"));
        }
        let z1 = parse_complex(parts[0])?;
        let z2 = parse_complex(parts[1])?;
        out.push(BallPoint::new(z1, z2).map_err(|e| format!("vertex {i}: {e}"))?);
    }
    if out.is_empty() {
        return Err("vertex list is empty".into());
    }
    Ok(out)
}

/// Parse a boundary-function spec.
pub fn parse_function(spec: &str) -> Result<BoundaryFunction, String> {
    let (tag, arg) = match spec.split_once(':') {
        Some((t, a)) => (t.trim(), a.trim()),
        None => (spec.trim(), ""),
    };
    match tag {
        "modulus_sq" => Ok(BoundaryFunction::modulus_sq()),
        "globevnik" => {
            let k = arg
                .strip_prefix("k=")
                .ok_or_else(|| "globevnik spec must be 'globevnik:k=<int>'".to_string())?
                .parse::<u32>()
                .map_err(|_| format!("bad globevnik exponent '{arg}'"))?;
            BoundaryFunction::globevnik(k).map_err(|e| e.to_string())
        }
        "poly" => Ok(BoundaryFunction::holomorphic_poly(parse_poly2(arg)?)),
        "charspec" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| format!("cannot read charspec file '{arg}': {e}"))?;
            let raw: CharacterizedSpec =
                serde_json::from_str(&text).map_err(|e| format!("bad charspec JSON: {e}"))?;
            // Revalidate the 2j < nu constraint after deserialization.
            let spec = CharacterizedSpec::new(raw.terms).map_err(|e| e.to_string())?;
            Ok(BoundaryFunction::characterized(spec))
        }
        other => Err(format!(
            "unknown function family '{other}' (expected modulus_sq, globevnik, poly, charspec)"
        )),
    }
}

/// Parse a disc-function spec: `dpoly:<expr in z>`, `zbar:k=<int>`,
/// `polyanalytic:<path to JSON>`.
pub fn parse_disc_function(spec: &str) -> Result<PolyanalyticFunction, String> {
    let (tag, arg) = match spec.split_once(':') {
        Some((t, a)) => (t.trim(), a.trim()),
        None => (spec.trim(), ""),
    };
    match tag {
        "dpoly" => {
            let p = parse_poly_expr(arg)?;
            let mut coeffs = vec![Complex::new(0.0, 0.0); p.keys().map(|&(a, _)| a as usize + 1).max().unwrap_or(1)];
            for (&(a, b), &c) in &p {
                if b != 0 {
                    return Err("dpoly expressions are univariate in z".into());
                }
                coeffs[a as usize] = c;
            }
            Ok(PolyanalyticFunction::new(vec![Polynomial::new(coeffs)]))
        }
        "zbar" => {
            let k = arg
                .strip_prefix("k=")
                .ok_or_else(|| "zbar spec must be 'zbar:k=<int>'".to_string())?
                .parse::<usize>()
                .map_err(|_| format!("bad zbar exponent '{arg}'"))?;
            let mut parts = vec![Polynomial::zero(); k + 1];
            parts[k] = Polynomial::constant(Complex::new(1.0, 0.0));
            Ok(PolyanalyticFunction::new(parts))
        }
        "polyanalytic" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| format!("cannot read polyanalytic file '{arg}': {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("bad polyanalytic JSON: {e}"))
        }
        other => Err(format!(
            "unknown disc function family '{other}' (expected dpoly, zbar, polyanalytic)"
        )),
    }
}

type PolyMap = BTreeMap<(u32, u32), Complex>;

/// Parse a polynomial expression in z1, z2 (z is an alias for z1):
/// `1+2z1*z2`, `z1^2 - (1-2i)*z2^3`, `0.5i*z1`.
pub fn parse_poly2(expr: &str) -> Result<Poly2, String> {
    let map = parse_poly_expr(expr)?;
    Ok(Poly2::new(map.into_iter().map(|((a, b), c)| (a, b, c)).collect()))
}

fn parse_poly_expr(expr: &str) -> Result<PolyMap, String> {
    let tokens = tokenize(expr)?;
    let mut pos = 0;
    let p = parse_sum(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(format!("unexpected trailing input in '{expr}'"));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Imag, // bare `i`
    Var(u8), // 1 or 2
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => { out.push(Token::Plus); i += 1; }
            '-' => { out.push(Token::Minus); i += 1; }
            '*' => { out.push(Token::Star); i += 1; }
            '^' => { out.push(Token::Caret); i += 1; }
            '(' => { out.push(Token::LParen); i += 1; }
            ')' => { out.push(Token::RParen); i += 1; }
            'i' => { out.push(Token::Imag); i += 1; }
            'z' => {
                match chars.get(i + 1) {
                    Some('1') | Some('2') => {
                        out.push(Token::Var(chars[i + 1] as u8 - b'0'));
                        i += 2;
                    }
                    Some(d) if d.is_ascii_digit() => {
                        return Err(format!("unknown variable 'z{d}' (expected z, z1 or z2)"));
                    }
                    _ => {
                        out.push(Token::Var(1));
                        i += 1;
                    }
                }
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let v: f64 = lit.parse().map_err(|_| format!("bad number '{lit}'"))?;
                out.push(Token::Num(v));
            }
            other => return Err(format!("unexpected character '{other}' in expression")),
        }
    }
    Ok(out)
}

fn map_add(a: &mut PolyMap, b: PolyMap, sign: f64) {
    for (k, v) in b {
        *a.entry(k).or_insert_with(|| Complex::new(0.0, 0.0)) += v * sign;
    }
}

fn map_mul(a: &PolyMap, b: &PolyMap) -> PolyMap {
    let mut out = PolyMap::new();
    for (&(p1, q1), &c1) in a {
        for (&(p2, q2), &c2) in b {
            *out.entry((p1 + p2, q1 + q2)).or_insert_with(|| Complex::new(0.0, 0.0)) += c1 * c2;
        }
    }
    out
}

fn constant(c: Complex) -> PolyMap {
    let mut m = PolyMap::new();
    m.insert((0, 0), c);
    m
}

fn parse_sum(tokens: &[Token], pos: &mut usize) -> Result<PolyMap, String> {
    let mut sign = 1.0;
    while matches!(tokens.get(*pos), Some(Token::Plus) | Some(Token::Minus)) {
        if tokens[*pos] == Token::Minus {
            sign = -sign;
        }
        *pos += 1;
    }
    let mut acc = parse_product(tokens, pos)?;
    if sign < 0.0 {
        acc = map_mul(&constant(Complex::new(-1.0, 0.0)), &acc);
    }
    while matches!(tokens.get(*pos), Some(Token::Plus) | Some(Token::Minus)) {
        let s = if tokens[*pos] == Token::Minus { -1.0 } else { 1.0 };
        *pos += 1;
        let rhs = parse_product(tokens, pos)?;
        map_add(&mut acc, rhs, s);
    }
    Ok(acc)
}

fn starts_factor(t: Option<&Token>) -> bool {
    matches!(t, Some(Token::Num(_) | Token::Imag | Token::Var(_) | Token::LParen))
}

fn parse_product(tokens: &[Token], pos: &mut usize) -> Result<PolyMap, String> {
    let mut acc = parse_power(tokens, pos)?;
    loop {
        if tokens.get(*pos) == Some(&Token::Star) {
            *pos += 1;
            let rhs = parse_power(tokens, pos)?;
            acc = map_mul(&acc, &rhs);
        } else if starts_factor(tokens.get(*pos)) {
            // Implicit multiplication, as in `2z1`.
            let rhs = parse_power(tokens, pos)?;
            acc = map_mul(&acc, &rhs);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(tokens: &[Token], pos: &mut usize) -> Result<PolyMap, String> {
    let base = parse_atom(tokens, pos)?;
    if tokens.get(*pos) == Some(&Token::Caret) {
        *pos += 1;
        let exp = match tokens.get(*pos) {
            Some(Token::Num(v)) if *v >= 0.0 && v.fract() == 0.0 => *v as u32,
            _ => return Err("exponent must be a non-negative integer".into()),
        };
        *pos += 1;
        let mut acc = constant(Complex::new(1.0, 0.0));
        for _ in 0..exp {
            acc = map_mul(&acc, &base);
        }
        return Ok(acc);
    }
    Ok(base)
}

fn parse_atom(tokens: &[Token], pos: &mut usize) -> Result<PolyMap, String> {
    match tokens.get(*pos) {
        Some(Token::Num(v)) => {
            *pos += 1;
            // `2i` tokenizes as Num(2), Imag.
            if tokens.get(*pos) == Some(&Token::Imag) {
                *pos += 1;
                Ok(constant(Complex::new(0.0, *v)))
            } else {
                Ok(constant(Complex::new(*v, 0.0)))
            }
        }
        Some(Token::Imag) => {
            *pos += 1;
            Ok(constant(Complex::new(0.0, 1.0)))
        }
        Some(Token::Var(which)) => {
            let mut m = PolyMap::new();
            m.insert(if *which == 1 { (1, 0) } else { (0, 1) }, Complex::new(1.0, 0.0));
            *pos += 1;
            Ok(m)
        }
        Some(Token::LParen) => {
            *pos += 1;
            let inner = parse_sum(tokens, pos)?;
            if tokens.get(*pos) != Some(&Token::RParen) {
                return Err("missing closing parenthesis".into());
            }
            *pos += 1;
            Ok(inner)
        }
        other => Err(format!("expected a factor, found {other:?}")),
    }
}
