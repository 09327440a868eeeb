//! Parser for weight expressions like "L0+2d-a1": integer linear
//! combinations of the fundamental weights L0..Lr, the imaginary root d
//! (affine only), and the simple roots a0..ar.

use qaff_core::{Algebra, Weight};

pub fn parse_weight(alg: &Algebra, input: &str) -> Result<Weight, String> {
    let mut total = Weight::zero(alg.rank());
    let mut chars = input.chars().peekable();
    let mut first = true;
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let Some(&c) = chars.peek() else {
            if first {
                return Err("empty weight expression".to_string());
            }
            break;
        };
        // sign
        let mut sign = 1i64;
        if c == '+' || c == '-' || c == '\u{2212}' {
            if c != '+' {
                sign = -1;
            }
            chars.next();
        } else if !first {
            return Err(format!("expected '+' or '-' before {c:?}"));
        }
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        // optional integer coefficient
        let mut digits = String::new();
        while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(chars.next().unwrap());
        }
        let coeff: i64 = if digits.is_empty() {
            1
        } else {
            digits.parse().map_err(|_| format!("bad coefficient {digits:?}"))?
        };
        while chars.peek().is_some_and(|c| c.is_whitespace() || *c == '*') {
            chars.next();
        }
        // symbol
        let sym = chars.next().ok_or("expected a symbol after the coefficient")?;
        let term = match sym {
            'd' => {
                if !alg.is_affine() {
                    return Err("'d' is only available for affine algebras".to_string());
                }
                alg.delta()
            }
            'L' | 'a' => {
                let mut idx = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    idx.push(chars.next().unwrap());
                }
                let node: usize = idx.parse().map_err(|_| format!("bad node index {idx:?}"))?;
                if !alg.valid_node(node) {
                    return Err(format!("node {node} out of range for {}", alg.label()));
                }
                if sym == 'L' {
                    alg.fundamental_weight(node)
                } else {
                    alg.simple_root(node).clone()
                }
            }
            other => return Err(format!("unknown symbol {other:?} (use L<i>, a<i>, d)")),
        };
        total = total.add(&term.scale(sign * coeff));
        first = false;
    }
    Ok(total)
}
