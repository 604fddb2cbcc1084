//! Script text → quantized script → articulated object.
//!
//! Accepts both the human and the token rendering, both delimiter spellings
//! (`<|layout_s|>` / `<|layout_start|>` ...), and arbitrary whitespace.
//! Malformed text reports a position; semantically invalid articulation
//! (bad indices, bins, graph shape) reports structured errors.

use super::quant::{
    dequantize_pos, dequantize_rot_limit, dequantize_trans_limit, POS_BIN_MAX, ROT_BIN_MAX,
    TRANS_BIN_MAX,
};
use super::{ArticulationScript, AxisCodebook, QuantBox, QuantJoint, AXIS_COUNT};
use crate::kinematics::{Aabb, ArticulatedObject, GraphError, Interval, Joint, JointKind, Link};
use crate::Vec3;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScriptParseError {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("box index {index} out of range at {line}:{col} (script declares {count} boxes)")]
    IndexOutOfRange {
        index: usize,
        count: usize,
        line: usize,
        col: usize,
    },
    #[error("{what} value {value} at {line}:{col} exceeds maximum bin {max}")]
    BinOutOfRange {
        what: &'static str,
        value: i64,
        max: u32,
        line: usize,
        col: usize,
    },
    #[error("duplicate {what} id {id} at {line}:{col}")]
    DuplicateId {
        what: &'static str,
        id: usize,
        line: usize,
        col: usize,
    },
    #[error("invalid articulation graph: {0}")]
    GraphInvalid(#[from] GraphError),
    #[error("axis code {code} has no codebook entry")]
    UnknownAxisCode { code: u32 },
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    /// `<P_k>`, `<D_k>`, `<LR_k>`, `<LT_k>`
    Special(SpecialKind, i64),
    LayoutStart,
    LayoutEnd,
    ArtStart,
    ArtEnd,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SpecialKind {
    Pos,
    Dir,
    RotLimit,
    TransLimit,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::Special(SpecialKind::Pos, v) => format!("<P_{v}>"),
            Tok::Special(SpecialKind::Dir, v) => format!("<D_{v}>"),
            Tok::Special(SpecialKind::RotLimit, v) => format!("<LR_{v}>"),
            Tok::Special(SpecialKind::TransLimit, v) => format!("<LT_{v}>"),
            Tok::LayoutStart => "layout-start delimiter".into(),
            Tok::LayoutEnd => "layout-end delimiter".into(),
            Tok::ArtStart => "articulation-start delimiter".into(),
            Tok::ArtEnd => "articulation-end delimiter".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    at: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            at: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.at)?;
        self.at += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.at).copied()
    }

    fn error(&self, expected: impl Into<String>, found: impl Into<String>) -> ScriptParseError {
        ScriptParseError::Syntax {
            line: self.line,
            col: self.col,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ScriptParseError> {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let spanned = |tok| Spanned { tok, line, col };
        let Some(b) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        match b {
            b'(' => {
                self.bump();
                Ok(spanned(Tok::LParen))
            }
            b')' => {
                self.bump();
                Ok(spanned(Tok::RParen))
            }
            b'[' => {
                self.bump();
                Ok(spanned(Tok::LBracket))
            }
            b']' => {
                self.bump();
                Ok(spanned(Tok::RBracket))
            }
            b',' => {
                self.bump();
                Ok(spanned(Tok::Comma))
            }
            b'=' => {
                self.bump();
                Ok(spanned(Tok::Equals))
            }
            b'<' => self.lex_angle().map(spanned),
            b'-' | b'0'..=b'9' => {
                let mut text = String::new();
                if b == b'-' {
                    text.push('-');
                    self.bump();
                }
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    text.push(self.bump().unwrap() as char);
                }
                if text == "-" {
                    return Err(self.error("digits after `-`", "nothing"));
                }
                let v: i64 = text
                    .parse()
                    .map_err(|_| self.error("an integer", format!("`{text}`")))?;
                Ok(spanned(Tok::Int(v)))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut text = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    text.push(self.bump().unwrap() as char);
                }
                Ok(spanned(Tok::Ident(text)))
            }
            other => Err(self.error("a token", format!("`{}`", other as char))),
        }
    }

    /// Lex `<|...|>` delimiters and `<X_n>` special tokens.
    fn lex_angle(&mut self) -> Result<Tok, ScriptParseError> {
        let start = self.at;
        self.bump(); // '<'
        if self.peek() == Some(b'|') {
            self.bump();
            let mut name = String::new();
            while matches!(self.peek(), Some(c) if c != b'|') {
                name.push(self.bump().unwrap() as char);
            }
            if self.bump() != Some(b'|') || self.bump() != Some(b'>') {
                return Err(self.error("`|>` closing a delimiter", "something else"));
            }
            match name.as_str() {
                "layout_s" | "layout_start" => Ok(Tok::LayoutStart),
                "layout_e" | "layout_end" => Ok(Tok::LayoutEnd),
                "art_s" | "art_start" => Ok(Tok::ArtStart),
                "art_e" | "art_end" => Ok(Tok::ArtEnd),
                other => Err(self.error("a block delimiter", format!("<|{other}|>"))),
            }
        } else {
            let mut body = String::new();
            while matches!(self.peek(), Some(c) if c != b'>') {
                body.push(self.bump().unwrap() as char);
            }
            if self.bump() != Some(b'>') {
                return Err(self.error("`>` closing a special token", "end of input"));
            }
            let (kind, digits) = if let Some(d) = body.strip_prefix("P_") {
                (SpecialKind::Pos, d)
            } else if let Some(d) = body.strip_prefix("D_") {
                (SpecialKind::Dir, d)
            } else if let Some(d) = body.strip_prefix("LR_") {
                (SpecialKind::RotLimit, d)
            } else if let Some(d) = body.strip_prefix("LT_") {
                (SpecialKind::TransLimit, d)
            } else {
                let text = String::from_utf8_lossy(&self.src[start..self.at]).to_string();
                return Err(self.error("<P_k>, <D_k>, <LR_k> or <LT_k>", text));
            };
            let v: i64 = digits
                .parse()
                .map_err(|_| self.error("digits in special token", format!("`{digits}`")))?;
            Ok(Tok::Special(kind, v))
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
}

#[derive(Debug, Default)]
struct RawScript {
    /// (label, box) in appearance order.
    boxes: Vec<(usize, QuantBox)>,
    /// joints in appearance order, referencing box labels.
    joints: Vec<QuantJoint>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.at.min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.at.min(self.tokens.len() - 1)].clone();
        self.at = (self.at + 1).min(self.tokens.len());
        t
    }

    fn err(&self, expected: impl Into<String>) -> ScriptParseError {
        let s = self.peek();
        ScriptParseError::Syntax {
            line: s.line,
            col: s.col,
            expected: expected.into(),
            found: s.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ScriptParseError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.err(tok.describe()))
        }
    }

    /// A bin-valued slot: a bare integer or a special token of `kind`.
    fn bin(&mut self, kind: SpecialKind, what: &'static str, max: u32) -> Result<u32, ScriptParseError> {
        let s = self.next();
        let value = match s.tok {
            Tok::Int(v) => v,
            Tok::Special(k, v) if k == kind => v,
            _ => {
                self.at -= 1;
                return Err(self.err(format!("{what} (integer or matching special token)")));
            }
        };
        if value < 0 || value > max as i64 {
            return Err(ScriptParseError::BinOutOfRange {
                what,
                value,
                max,
                line: s.line,
                col: s.col,
            });
        }
        Ok(value as u32)
    }

    fn plain_index(&mut self, what: &'static str) -> Result<usize, ScriptParseError> {
        let s = self.next();
        match s.tok {
            Tok::Int(v) if v >= 0 => Ok(v as usize),
            _ => {
                self.at -= 1;
                Err(self.err(format!("{what} (non-negative integer)")))
            }
        }
    }

    fn bracketed3(
        &mut self,
        kind: SpecialKind,
        what: &'static str,
        max: u32,
    ) -> Result<[u32; 3], ScriptParseError> {
        self.expect(Tok::LBracket)?;
        let a = self.bin(kind, what, max)?;
        self.expect(Tok::Comma)?;
        let b = self.bin(kind, what, max)?;
        self.expect(Tok::Comma)?;
        let c = self.bin(kind, what, max)?;
        self.expect(Tok::RBracket)?;
        Ok([a, b, c])
    }

    fn bracketed2(
        &mut self,
        kind: SpecialKind,
        what: &'static str,
        max: u32,
    ) -> Result<[u32; 2], ScriptParseError> {
        self.expect(Tok::LBracket)?;
        let a = self.bin(kind, what, max)?;
        self.expect(Tok::Comma)?;
        let b = self.bin(kind, what, max)?;
        self.expect(Tok::RBracket)?;
        Ok([a, b])
    }

    fn parse(&mut self) -> Result<RawScript, ScriptParseError> {
        let mut raw = RawScript::default();
        loop {
            let s = self.peek().clone();
            match &s.tok {
                Tok::Eof => break,
                Tok::LayoutStart | Tok::LayoutEnd | Tok::ArtStart | Tok::ArtEnd => {
                    // delimiters are accepted anywhere between statements
                    self.next();
                }
                Tok::Ident(name) if name.starts_with("bbox_") => {
                    let label: usize = name["bbox_".len()..]
                        .parse()
                        .map_err(|_| self.err("bbox_<index>"))?;
                    if raw.boxes.iter().any(|(l, _)| *l == label) {
                        return Err(ScriptParseError::DuplicateId {
                            what: "bbox",
                            id: label,
                            line: s.line,
                            col: s.col,
                        });
                    }
                    self.next();
                    self.expect(Tok::Equals)?;
                    match self.next().tok {
                        Tok::Ident(ref cls) if cls == "BBox" => {}
                        _ => {
                            self.at -= 1;
                            return Err(self.err("`BBox`"));
                        }
                    }
                    self.expect(Tok::LParen)?;
                    let mut v = [0u32; 6];
                    for (i, slot) in v.iter_mut().enumerate() {
                        if i > 0 {
                            self.expect(Tok::Comma)?;
                        }
                        *slot = self.bin(SpecialKind::Pos, "box coordinate", POS_BIN_MAX)?;
                    }
                    self.expect(Tok::RParen)?;
                    raw.boxes.push((
                        label,
                        QuantBox {
                            min_bins: [v[0], v[1], v[2]],
                            max_bins: [v[3], v[4], v[5]],
                        },
                    ));
                }
                Tok::Ident(name) if name.starts_with("joint_") => {
                    name["joint_".len()..]
                        .parse::<usize>()
                        .map_err(|_| self.err("joint_<index>"))?;
                    self.next();
                    self.expect(Tok::Equals)?;
                    let kind = match self.next().tok {
                        Tok::Ident(ref cls) => match cls.as_str() {
                            "RevoluteJoint" => JointKind::Revolute,
                            "ContinuousJoint" => JointKind::Continuous,
                            "ScrewJoint" => JointKind::Screw,
                            "PrismaticJoint" => JointKind::Prismatic,
                            _ => {
                                self.at -= 1;
                                return Err(self.err(
                                    "RevoluteJoint, ContinuousJoint, ScrewJoint or PrismaticJoint",
                                ));
                            }
                        },
                        _ => {
                            self.at -= 1;
                            return Err(self.err("a joint class name"));
                        }
                    };
                    self.expect(Tok::LParen)?;
                    let parent = self.plain_index("parent box id")?;
                    self.expect(Tok::Comma)?;
                    let child = self.plain_index("child box id")?;
                    self.expect(Tok::Comma)?;
                    let axis_code = self.bin(
                        SpecialKind::Dir,
                        "axis direction code",
                        AXIS_COUNT as u32 - 1,
                    )?;
                    let (origin_bins, limit_bins) = match kind {
                        JointKind::Revolute => {
                            self.expect(Tok::Comma)?;
                            let o = self.bracketed3(SpecialKind::Pos, "axis position", POS_BIN_MAX)?;
                            self.expect(Tok::Comma)?;
                            let l =
                                self.bracketed2(SpecialKind::RotLimit, "rotation limit", ROT_BIN_MAX)?;
                            (Some(o), Some(l))
                        }
                        JointKind::Continuous => {
                            self.expect(Tok::Comma)?;
                            let o = self.bracketed3(SpecialKind::Pos, "axis position", POS_BIN_MAX)?;
                            (Some(o), None)
                        }
                        JointKind::Screw => {
                            self.expect(Tok::Comma)?;
                            let o = self.bracketed3(SpecialKind::Pos, "axis position", POS_BIN_MAX)?;
                            self.expect(Tok::Comma)?;
                            let l = self.bracketed2(
                                SpecialKind::TransLimit,
                                "translation limit",
                                TRANS_BIN_MAX,
                            )?;
                            (Some(o), Some(l))
                        }
                        JointKind::Prismatic => {
                            self.expect(Tok::Comma)?;
                            let l = self.bracketed2(
                                SpecialKind::TransLimit,
                                "translation limit",
                                TRANS_BIN_MAX,
                            )?;
                            (None, Some(l))
                        }
                        JointKind::Fixed => unreachable!(),
                    };
                    self.expect(Tok::RParen)?;
                    raw.joints.push(QuantJoint {
                        kind,
                        parent,
                        child,
                        axis_code,
                        origin_bins,
                        limit_bins,
                    });
                }
                _ => return Err(self.err("`bbox_<i>=`, `joint_<i>=` or a block delimiter")),
            }
        }
        Ok(raw)
    }
}

/// Parse either rendering into a quantized script. Box labels may be sparse;
/// they are re-mapped densely in ascending label order, and joints re-point
/// accordingly (joints then sort by child index).
pub fn parse_script_quantized(text: &str) -> Result<ArticulationScript, ScriptParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let eof = t.tok == Tok::Eof;
        tokens.push(t);
        if eof {
            break;
        }
    }
    let mut parser = Parser { tokens, at: 0 };
    let raw = parser.parse()?;

    let mut labels: Vec<usize> = raw.boxes.iter().map(|(l, _)| *l).collect();
    labels.sort_unstable();
    let index_of = |label: usize| labels.binary_search(&label).ok();

    let mut boxes_by_label: Vec<(usize, QuantBox)> = raw.boxes;
    boxes_by_label.sort_by_key(|(l, _)| *l);
    let boxes: Vec<QuantBox> = boxes_by_label.iter().map(|(_, b)| *b).collect();

    let mut joints = Vec::with_capacity(raw.joints.len());
    for mut joint in raw.joints {
        for endpoint in [&mut joint.parent, &mut joint.child] {
            *endpoint = index_of(*endpoint).ok_or(ScriptParseError::IndexOutOfRange {
                index: *endpoint,
                count: boxes.len(),
                line: 0,
                col: 0,
            })?;
        }
        joints.push(joint);
    }
    joints.sort_by_key(|j| (j.child, j.parent, j.axis_code));

    Ok(ArticulationScript { boxes, joints })
}

/// Dequantize a script into an articulated object and validate its graph.
pub fn decode_script(
    script: &ArticulationScript,
    codebook: &AxisCodebook,
) -> Result<ArticulatedObject, ScriptParseError> {
    let links: Vec<Link> = script
        .boxes
        .iter()
        .enumerate()
        .map(|(id, b)| Link {
            id,
            name: format!("part_{id}"),
            aabb: Aabb::new(
                Vec3::new(
                    dequantize_pos(b.min_bins[0]),
                    dequantize_pos(b.min_bins[1]),
                    dequantize_pos(b.min_bins[2]),
                ),
                Vec3::new(
                    dequantize_pos(b.max_bins[0]),
                    dequantize_pos(b.max_bins[1]),
                    dequantize_pos(b.max_bins[2]),
                ),
            ),
            mesh: None,
        })
        .collect();

    let mut joints = Vec::with_capacity(script.joints.len());
    for (id, qj) in script.joints.iter().enumerate() {
        let axis_dir = codebook
            .decode(qj.axis_code)
            .ok_or(ScriptParseError::UnknownAxisCode { code: qj.axis_code })?;
        let axis_origin = qj.origin_bins.map(|o| {
            Vec3::new(
                dequantize_pos(o[0]),
                dequantize_pos(o[1]),
                dequantize_pos(o[2]),
            )
        });
        let limit = qj.limit_bins.map(|l| match qj.kind {
            JointKind::Revolute => {
                Interval::new(dequantize_rot_limit(l[0]), dequantize_rot_limit(l[1]))
            }
            _ => Interval::new(dequantize_trans_limit(l[0]), dequantize_trans_limit(l[1])),
        });
        joints.push(Joint {
            id,
            kind: qj.kind,
            parent: qj.parent,
            child: qj.child,
            axis_dir,
            axis_origin,
            limit,
        });
    }

    let object = ArticulatedObject::new(links, joints);
    crate::kinematics::build_graph(&object)?;
    Ok(object)
}

/// Parse script text (either rendering) straight to an articulated object.
pub fn parse_script(
    text: &str,
    codebook: &AxisCodebook,
) -> Result<ArticulatedObject, ScriptParseError> {
    let script = parse_script_quantized(text)?;
    decode_script(&script, codebook)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::build_axis_codebook;

    #[test]
    fn single_box_human_form() {
        let cb = build_axis_codebook();
        let obj = parse_script("bbox_0=BBox(0,0,0,1,1,1)", &cb).unwrap();
        assert_eq!(obj.links.len(), 1);
        assert_eq!(obj.joints.len(), 0);
        let aabb = obj.links[0].aabb;
        assert_eq!(aabb.min, Vec3::new(-1.0, -1.0, -1.0));
        assert!((aabb.max.x - (2.0 / 128.0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bin_out_of_range() {
        let err = parse_script_quantized("bbox_0=BBox(<P_200>,0,0,1,1,1)").unwrap_err();
        assert!(matches!(
            err,
            ScriptParseError::BinOutOfRange {
                value: 200,
                max: 128,
                ..
            }
        ));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_script_quantized("bbox_0=BBox(1,2\n3)").unwrap_err();
        match err {
            ScriptParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn joint_referencing_missing_box() {
        let text = "bbox_0=BBox(0,0,0,1,1,1)\njoint_0=PrismaticJoint(0,3,<D_4>,[<LT_32>,<LT_38>])";
        let err = parse_script_quantized(text).unwrap_err();
        assert!(matches!(
            err,
            ScriptParseError::IndexOutOfRange { index: 3, count: 1, .. }
        ));
    }

    #[test]
    fn wrong_special_kind_rejected() {
        let text = "bbox_0=BBox(<LT_3>,0,0,1,1,1)";
        assert!(matches!(
            parse_script_quantized(text),
            Err(ScriptParseError::Syntax { .. })
        ));
    }

    #[test]
    fn duplicate_bbox_label() {
        let text = "bbox_0=BBox(0,0,0,1,1,1)\nbbox_0=BBox(0,0,0,1,1,1)";
        assert!(matches!(
            parse_script_quantized(text),
            Err(ScriptParseError::DuplicateId { what: "bbox", id: 0, .. })
        ));
    }

    #[test]
    fn cycle_reported_as_graph_invalid() {
        let cb = build_axis_codebook();
        let text = "\
bbox_0=BBox(0,0,0,8,8,8)
bbox_1=BBox(8,0,0,16,8,8)
bbox_2=BBox(16,0,0,24,8,8)
joint_0=ContinuousJoint(0,1,<D_2>,[64,64,64])
joint_1=ContinuousJoint(1,2,<D_2>,[64,64,64])
joint_2=ContinuousJoint(2,0,<D_2>,[64,64,64])";
        assert!(matches!(
            parse_script(text, &cb),
            Err(ScriptParseError::GraphInvalid(GraphError::CycleDetected(_)))
        ));
    }

    #[test]
    fn both_delimiter_spellings_accepted() {
        let a = "<|layout_s|>\nbbox_0=BBox(0,0,0,1,1,1)\n<|layout_e|>\n";
        let b = "<|layout_start|>\nbbox_0=BBox(0,0,0,1,1,1)\n<|layout_end|>\n";
        assert_eq!(
            parse_script_quantized(a).unwrap(),
            parse_script_quantized(b).unwrap()
        );
    }
}
