use std::fmt;

use crate::corpus::{Attribute, AttributeLabels, Document, Domain, LabelPolicy, Quality, TypeOfSpeech};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Number(f64),
    Quality(Quality),
    Domain(Domain),
    TypeOfSpeech(TypeOfSpeech),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    True,
    False,
    Cmp { attribute: Attribute, op: CmpOp, value: Operand },
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::False => f.write_str("false"),
            Predicate::Cmp { attribute, op, value } => {
                let v = match value {
                    Operand::Number(x) => x.to_string(),
                    Operand::Quality(q) => format!("{:?}", q.name()),
                    Operand::Domain(d) => format!("{:?}", d.name()),
                    Operand::TypeOfSpeech(t) => format!("{:?}", t.name()),
                };
                write!(f, "{}{}{}", attribute.name(), op.symbol(), v)
            }
            Predicate::And(a, b) => write!(f, "({a} && {b})"),
            Predicate::Or(a, b) => write!(f, "({a} || {b})"),
            Predicate::Not(a) => write!(f, "!{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Str(String),
    Op(CmpOp),
    And,
    Or,
    Not,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let err = |m: String| Error::Predicate(format!("{m} in {src:?}"));
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            '&' if next == Some('&') => {
                out.push(Token::And);
                i += 2;
            }
            '|' if next == Some('|') => {
                out.push(Token::Or);
                i += 2;
            }
            '<' | '>' | '=' | '!' => {
                let two = next == Some('=');
                let op = match (c, two) {
                    ('<', false) => Token::Op(CmpOp::Lt),
                    ('<', true) => Token::Op(CmpOp::Le),
                    ('>', false) => Token::Op(CmpOp::Gt),
                    ('>', true) => Token::Op(CmpOp::Ge),
                    ('=', true) => Token::Op(CmpOp::Eq),
                    ('=', false) => Token::Op(CmpOp::Eq),
                    ('!', true) => Token::Op(CmpOp::Ne),
                    _ => Token::Not,
                };
                out.push(op);
                i += if two { 2 } else { 1 };
            }
            '"' | '\'' => {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&x| x == c)
                    .ok_or_else(|| err("unterminated string".into()))?;
                out.push(Token::Str(chars[i + 1..i + 1 + end].iter().collect()));
                i += end + 2;
            }
            c if c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | '+') => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '.' | '-' | '+')) {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Predicate(format!("{m} in {:?}", self.src))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<Predicate> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Predicate::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Predicate> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Predicate::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Predicate> {
        match self.bump() {
            Some(Token::Not) => Ok(Predicate::Not(Box::new(self.unary()?))),
            Some(Token::Open) => {
                let inner = self.or()?;
                match self.bump() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(self.err("missing ')'")),
                }
            }
            Some(Token::Ident(name)) => {
                if self.peek().is_none_or(|t| !matches!(t, Token::Op(_))) {
                    return match name.to_ascii_lowercase().as_str() {
                        "true" => Ok(Predicate::True),
                        "false" => Ok(Predicate::False),
                        _ => Err(self.err(&format!("expected a comparison after {name:?}"))),
                    };
                }
                let attribute: Attribute = name
                    .parse()
                    .map_err(|_| self.err(&format!("unknown attribute {name:?}")))?;
                let Some(Token::Op(op)) = self.bump() else { unreachable!() };
                let raw = match self.bump() {
                    Some(Token::Ident(v)) | Some(Token::Str(v)) => v,
                    _ => return Err(self.err("expected a value")),
                };
                self.operand(attribute, op, &raw)
            }
            _ => Err(self.err("expected a comparison")),
        }
    }

    fn operand(&self, attribute: Attribute, op: CmpOp, raw: &str) -> Result<Predicate> {
        let value = match attribute {
            Attribute::Toxicity => Operand::Number(
                raw.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(&format!("toxicity needs a number, got {raw:?}")))?,
            ),
            _ if !matches!(op, CmpOp::Eq | CmpOp::Ne) => {
                return Err(self.err(&format!("{} supports only == and !=", attribute.name())))
            }
            Attribute::Quality => Operand::Quality(Quality::parse(raw, LabelPolicy::Strict)?),
            Attribute::Domain => Operand::Domain(Domain::parse(raw, LabelPolicy::Strict)?),
            Attribute::TypeOfSpeech => Operand::TypeOfSpeech(TypeOfSpeech::parse(raw, LabelPolicy::Strict)?),
        };
        Ok(Predicate::Cmp { attribute, op, value })
    }
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        Predicate::parse(src)
    }
}

impl Predicate {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src, tokens: lex(src)?, pos: 0 };
        if p.tokens.is_empty() {
            return Err(p.err("empty predicate"));
        }
        let pred = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(p.err("trailing input"));
        }
        Ok(pred)
    }

    /// Attributes referenced anywhere in the expression, in first-use order.
    pub fn attributes(&self) -> Vec<Attribute> {
        fn walk(p: &Predicate, out: &mut Vec<Attribute>) {
            match p {
                Predicate::Cmp { attribute, .. } if !out.contains(attribute) => out.push(*attribute),
                Predicate::And(a, b) | Predicate::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Predicate::Not(a) => walk(a, out),
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// `Err(attribute)` when a referenced attribute is unlabeled.
    pub fn eval(&self, labels: Option<&AttributeLabels>) -> std::result::Result<bool, Attribute> {
        for a in self.attributes() {
            let present = labels.is_some_and(|l| match a {
                Attribute::Toxicity => l.toxicity.is_some(),
                Attribute::Quality => l.quality.is_some_and(|q| q != Quality::Unknown),
                Attribute::Domain => l.domain.is_some_and(|d| d != Domain::Unknown),
                Attribute::TypeOfSpeech => l.type_of_speech.is_some_and(|t| t != TypeOfSpeech::Unknown),
            });
            if !present {
                return Err(a);
            }
        }
        Ok(self.eval_present(labels.unwrap_or(&AttributeLabels::default())))
    }

    fn eval_present(&self, l: &AttributeLabels) -> bool {
        match self {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::And(a, b) => a.eval_present(l) && b.eval_present(l),
            Predicate::Or(a, b) => a.eval_present(l) || b.eval_present(l),
            Predicate::Not(a) => !a.eval_present(l),
            Predicate::Cmp { op, value, .. } => match value {
                Operand::Number(x) => op.holds(l.toxicity.unwrap_or(f64::NAN), *x),
                Operand::Quality(q) => op.holds(l.quality.as_ref(), Some(q)),
                Operand::Domain(d) => op.holds(l.domain.as_ref(), Some(d)),
                Operand::TypeOfSpeech(t) => op.holds(l.type_of_speech.as_ref(), Some(t)),
            },
        }
    }
}

/// Matching documents plus how many were skipped for missing labels.
#[derive(Debug, Clone, Default)]
pub struct TargetSet {
    pub documents: Vec<Document>,
    pub missing_labels: usize,
}

pub fn build_attribute_target<'a, I>(corpus: I, predicate: &Predicate, policy: LabelPolicy) -> Result<TargetSet>
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut out = TargetSet::default();
    for doc in corpus {
        match predicate.eval(doc.attributes.as_ref()) {
            Ok(true) => out.documents.push(doc.clone()),
            Ok(false) => {}
            Err(attribute) => match policy {
                LabelPolicy::Strict => {
                    return Err(Error::MissingLabel {
                        id: doc.id.clone(),
                        attribute: attribute.name().to_string(),
                    })
                }
                LabelPolicy::Lenient => out.missing_labels += 1,
            },
        }
    }
    Ok(out)
}
