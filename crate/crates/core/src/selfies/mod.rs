//! SELFIES-style molecular token codec.
//!
//! Every token string over the alphabet decodes to a valence-valid graph:
//! bond requests are clipped to the remaining valence budget and dangling
//! branch or ring material is ignored. Encoding walks the canonicalized
//! graph depth-first, so token output is deterministic per molecule.

mod decode;
mod encode;

pub use decode::decode_selfies;
pub use encode::encode_selfies;

use thiserror::Error;

use crate::chem::Element;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SelfiesError {
    #[error("unknown token '{0}'")]
    UnknownToken(String),
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
}

/// One bracketed token, e.g. `[C]`, `[=N]`, `[Branch1]`, `[NH3+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelfiesToken(String);

impl SelfiesToken {
    /// Validating constructor; the text must be a grammar token.
    pub fn new(text: &str) -> Result<Self, SelfiesError> {
        parse_token(text)?;
        Ok(SelfiesToken(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn kind(&self) -> TokenKind {
        parse_token(&self.0).expect("validated at construction")
    }
}

impl std::fmt::Display for SelfiesToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parsed token structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Atom { order: u8, element: Element, min_h: Option<u8>, charge: i8 },
    Branch { operands: u8 },
    Ring { order: u8, operands: u8 },
}

/// Concatenated token string -> token list (strict).
pub fn tokenize_selfies(s: &str) -> Result<Vec<SelfiesToken>, SelfiesError> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(SelfiesError::UnknownToken(rest.chars().take(8).collect()));
        }
        let Some(end) = rest.find(']') else {
            return Err(SelfiesError::UnknownToken(rest.to_string()));
        };
        out.push(SelfiesToken::new(&rest[..=end])?);
        rest = &rest[end + 1..];
    }
    Ok(out)
}

pub fn render_selfies(tokens: &[SelfiesToken]) -> String {
    tokens.iter().map(|t| t.as_str()).collect()
}

fn parse_token(text: &str) -> Result<TokenKind, SelfiesError> {
    let err = || SelfiesError::UnknownToken(text.to_string());
    let inner = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
    if inner.is_empty() {
        return Err(err());
    }
    let (order, body) = match inner.as_bytes()[0] {
        b'=' => (2u8, &inner[1..]),
        b'#' => (3u8, &inner[1..]),
        _ => (1u8, inner),
    };
    match body {
        "Branch1" if order == 1 => return Ok(TokenKind::Branch { operands: 1 }),
        "Branch2" if order == 1 => return Ok(TokenKind::Branch { operands: 2 }),
        "Ring1" => return Ok(TokenKind::Ring { order, operands: 1 }),
        "Ring2" => return Ok(TokenKind::Ring { order, operands: 2 }),
        _ => {}
    }
    // Atom: element symbol, optional H count, optional signed charge.
    let bytes = body.as_bytes();
    if bytes.is_empty() || !bytes[0].is_ascii_uppercase() {
        return Err(err());
    }
    let sym_len = if bytes.len() >= 2 && bytes[1].is_ascii_lowercase() { 2 } else { 1 };
    let element = Element::from_symbol(&body[..sym_len]).ok_or_else(err)?;
    if element == Element::H {
        return Err(err());
    }
    let mut rest = &body[sym_len..];
    let mut min_h = None;
    if let Some(r) = rest.strip_prefix('H') {
        let d = r.as_bytes().first().filter(|b| b.is_ascii_digit()).ok_or_else(err)?;
        min_h = Some(d - b'0');
        rest = &r[1..];
    }
    if let Some(sign) = rest.chars().next() {
        if sign != '+' && sign != '-' {
            return Err(err());
        }
        let digits = &rest[1..];
        if digits.len() != 1 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mag: i8 = digits.parse().map_err(|_| err())?;
        let charge = if sign == '+' { mag } else { -mag };
        return Ok(TokenKind::Atom { order, element, min_h, charge });
    }
    Ok(TokenKind::Atom { order, element, min_h, charge: 0 })
}

/// Index alphabet for branch lengths and ring distances (base 16). Tokens
/// outside the table count as zero, which keeps decoding total.
pub(crate) const INDEX_ORDER: [&str; 16] = [
    "[C]", "[Ring1]", "[Ring2]", "[Branch1]", "[Branch2]", "[=C]", "[#C]", "[N]", "[=N]", "[O]",
    "[S]", "[P]", "[F]", "[Cl]", "[Br]", "[I]",
];

pub(crate) fn index_value(tok: &SelfiesToken) -> u64 {
    INDEX_ORDER.iter().position(|&t| t == tok.as_str()).unwrap_or(0) as u64
}

pub(crate) fn index_tokens(value: u64, operands: u8) -> Vec<SelfiesToken> {
    let mut digits = vec![0u64; operands as usize];
    let mut v = value;
    for d in digits.iter_mut().rev() {
        *d = v % 16;
        v /= 16;
    }
    debug_assert_eq!(v, 0, "index value {value} too large for {operands} operands");
    digits
        .into_iter()
        .map(|d| SelfiesToken(INDEX_ORDER[d as usize].to_string()))
        .collect()
}

/// Hydrogen fill: smallest allowed valence >= used + pinned H. The pinned
/// count is clamped so a fill always exists.
pub(crate) fn hydrogen_fill(element: Element, charge: i8, used: u32, min_h: u32) -> u8 {
    let allowed = element.allowed_valences(charge);
    let max = allowed.iter().copied().max().unwrap_or(0) as u32;
    let min_h = min_h.min(max.saturating_sub(used));
    let target = allowed
        .iter()
        .map(|&v| v as u32)
        .find(|&v| v >= used + min_h)
        .unwrap_or_else(|| max.max(used));
    target.saturating_sub(used) as u8
}

/// Maximum bond budget for an atom token: highest allowed valence minus the
/// pinned hydrogen count.
pub(crate) fn bond_capacity(element: Element, charge: i8, min_h: Option<u8>) -> u32 {
    let max = element.allowed_valences(charge).iter().copied().max().unwrap_or(0) as u32;
    max.saturating_sub(min_h.unwrap_or(0) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_parsing() {
        assert!(matches!(
            parse_token("[C]"),
            Ok(TokenKind::Atom { order: 1, element: Element::C, min_h: None, charge: 0 })
        ));
        assert!(matches!(
            parse_token("[#N]"),
            Ok(TokenKind::Atom { order: 3, element: Element::N, .. })
        ));
        assert!(matches!(
            parse_token("[NH4+1]"),
            Ok(TokenKind::Atom { order: 1, element: Element::N, min_h: Some(4), charge: 1 })
        ));
        assert!(matches!(parse_token("[Branch2]"), Ok(TokenKind::Branch { operands: 2 })));
        assert!(matches!(parse_token("[=Ring1]"), Ok(TokenKind::Ring { order: 2, operands: 1 })));
        assert!(parse_token("[MASK]").is_err());
        assert!(parse_token("[=Branch1]").is_err());
        assert!(parse_token("[]").is_err());
        assert!(parse_token("C").is_err());
        assert!(parse_token("[N+]").is_err(), "charge magnitude digit is required");
    }

    #[test]
    fn index_roundtrip() {
        for v in [0u64, 1, 15, 16, 170, 255] {
            let toks = index_tokens(v, 2);
            let got = toks.iter().fold(0u64, |acc, t| acc * 16 + index_value(t));
            assert_eq!(got, v);
        }
    }
}
