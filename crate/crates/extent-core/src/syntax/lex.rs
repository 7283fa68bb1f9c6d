//! Tokenizer for the `.stt` language. Comments run from `--` to end of line.

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Zero,
    One,
    // multi-char symbols
    Assign,   // :=
    Arrow,    // ->
    Le,       // <=
    EqEq,     // ==
    AndAnd,   // /\
    OrOr,     // \/
    BarCaret, // |^
    // single-char symbols
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Dot,
    Colon,
    Bar,
    Backslash,
    Caret,
    Star,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Le => "`<=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::AndAnd => "`/\\`".into(),
            Tok::OrOr => "`\\/`".into(),
            Tok::BarCaret => "`|^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Star => "`*`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    for (li, raw) in src.lines().enumerate() {
        let line = li + 1;
        let mut chars: Vec<char> = raw.chars().collect();
        // strip comments, tracking the earliest `--`
        if let Some(p) = find_comment(&chars) {
            chars.truncate(p);
        }
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let two = if i + 1 < chars.len() {
                Some((chars[i], chars[i + 1]))
            } else {
                None
            };
            let tok = match two {
                Some((':', '=')) => Some((Tok::Assign, 2)),
                Some(('-', '>')) => Some((Tok::Arrow, 2)),
                Some(('<', '=')) => Some((Tok::Le, 2)),
                Some(('=', '=')) => Some((Tok::EqEq, 2)),
                Some(('/', '\\')) => Some((Tok::AndAnd, 2)),
                Some(('\\', '/')) => Some((Tok::OrOr, 2)),
                Some(('|', '^')) => Some((Tok::BarCaret, 2)),
                _ => None,
            };
            let (tok, width) = match tok {
                Some(t) => t,
                None => match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    '[' => (Tok::LBracket, 1),
                    ']' => (Tok::RBracket, 1),
                    '<' => (Tok::Lt, 1),
                    '>' => (Tok::Gt, 1),
                    ',' => (Tok::Comma, 1),
                    '.' => (Tok::Dot, 1),
                    ':' => (Tok::Colon, 1),
                    '|' => (Tok::Bar, 1),
                    '\\' => (Tok::Backslash, 1),
                    '^' => (Tok::Caret, 1),
                    '*' => (Tok::Star, 1),
                    '0' => (Tok::Zero, 1),
                    '1' => (Tok::One, 1),
                    c if c.is_ascii_alphabetic() || c == '_' => {
                        let start = i;
                        let mut j = i;
                        while j < chars.len()
                            && (chars[j].is_ascii_alphanumeric()
                                || chars[j] == '_'
                                || chars[j] == '\'')
                        {
                            j += 1;
                        }
                        let name: String = chars[start..j].iter().collect();
                        (Tok::Ident(name), j - start)
                    }
                    other => {
                        return Err(SyntaxError {
                            line,
                            col,
                            expected: vec!["a token".into()],
                            found: format!("`{other}`"),
                        })
                    }
                },
            };
            out.push(Token { tok, line, col });
            i += width;
        }
    }
    Ok(out)
}

fn find_comment(chars: &[char]) -> Option<usize> {
    let mut i = 0;
    while i + 1 < chars.len() {
        if chars[i] == '-' && chars[i + 1] == '-' {
            return Some(i);
        }
        i += 1;
    }
    None
}
