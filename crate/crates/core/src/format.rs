//! Plain-text diagram files.
//!
//! ```text
//! # genus-1 diagram of S^4
//! [surface] genus=1 boundary=0
//!
//! [system alpha1]
//! piece genus=0 scars=2 boundary=0
//! curve c1 class=a1:1 piece-data=0.0|0.1|+
//!
//! [system alpha2]
//! piece genus=0 scars=2 boundary=0
//! curve c1 class=b1:1 piece-data=0.0|0.1|+
//!
//! [system alpha3]
//! piece genus=0 scars=2 boundary=0
//! curve c1 class=a1:1 piece-data=0.0|0.1|+
//!
//! [page]
//! empty
//!
//! [suture]
//! ```
//!
//! * `[surface]` carries the central surface on its header line.
//! * `[system NAME]` blocks list the pieces of the surface cut along the
//!   system (`piece genus= scars= boundary=`, missing keys read as 0) and its
//!   curves. A system without `piece` lines and without curves is the
//!   uncut surface. `class=` is a comma-separated list of `symbol:coeff`
//!   over `a1 b1 ... ag bg d1 ... d(b-1)` (a bare symbol means coefficient
//!   1, `0` is the zero class). `piece-data=P.S|Q.T|SIGN` glues scar slot
//!   `S` of piece `P` to slot `T` of piece `Q` (pieces and slots count from
//!   0, `SIGN` is `+` or `-`).
//! * `[page]` holds `empty` or one `component genus= boundary=` per
//!   component.
//! * `[suture]` holds `pair I J` lines matching surface boundary circle `I`
//!   with page boundary circle `J`. It may be left out when the surface is
//!   closed.
//!
//! `#` starts a comment. Sections may come in any order.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::compression::CutSystem;
use crate::curve_map::{Orientation, Piece, ScarSlot, TracedCurve, TracedMulticurve};
use crate::multisection::MultisectionDiagram;
use crate::surface::{BasisElement, CurveClass, Surface, SurfaceCollection};

/// Largest genus, boundary count or scar count accepted from a file.
pub const SIZE_LIMIT: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    MissingSection,
    DuplicateName,
    BasisOutOfRange,
    MalformedLine,
    /// Every line parsed but the pieces do not fit together.
    InvalidStructure,
}

impl ParseErrorKind {
    pub fn tag(self) -> &'static str {
        match self {
            ParseErrorKind::MissingSection => "MISSING_SECTION",
            ParseErrorKind::DuplicateName => "DUPLICATE_NAME",
            ParseErrorKind::BasisOutOfRange => "BASIS_OUT_OF_RANGE",
            ParseErrorKind::MalformedLine => "MALFORMED_LINE",
            ParseErrorKind::InvalidStructure => "INVALID_STRUCTURE",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at line {line}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based; one past the last line for problems found at end of input.
    pub line: usize,
    pub message: String,
}

fn perr(kind: ParseErrorKind, line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line,
        message: message.into(),
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    perr(ParseErrorKind::MalformedLine, line, message)
}

struct RawCurve {
    line: usize,
    name: String,
    terms: Vec<(BasisElement, BigInt)>,
    glue: TracedCurve,
}

struct RawSystem {
    line: usize,
    name: String,
    pieces: Vec<Piece>,
    curves: Vec<RawCurve>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Surface,
    System,
    Page,
    Suture,
}

#[derive(Default)]
struct Raw {
    surface: Option<(usize, Surface)>,
    systems: Vec<RawSystem>,
    page: Option<(usize, Vec<Surface>, bool)>,
    suture: Option<(usize, Vec<SuturePair>)>,
}

/// `(line, surface circle, page circle)`
type SuturePair = (usize, usize, usize);

/// Splits `key=value` attributes; returns them in order.
fn attributes<'a>(
    line: usize,
    words: impl Iterator<Item = &'a str>,
) -> Result<Vec<(&'a str, &'a str)>, ParseError> {
    words
        .map(|w| {
            w.split_once('=')
                .filter(|(k, v)| !k.is_empty() && !v.is_empty())
                .ok_or_else(|| malformed(line, format!("expected key=value, got {w:?}")))
        })
        .collect()
}

fn parse_count(line: usize, key: &str, v: &str) -> Result<u32, ParseError> {
    let n: u32 = v.parse().map_err(|_| {
        malformed(
            line,
            format!("{key} must be a nonnegative integer, got {v:?}"),
        )
    })?;
    if n > SIZE_LIMIT {
        return Err(malformed(
            line,
            format!("{key}={n} exceeds the limit {SIZE_LIMIT}"),
        ));
    }
    Ok(n)
}

/// Reads `genus=`/`boundary=`/`scars=` style attributes, each at most once.
fn counts<const N: usize>(
    line: usize,
    attrs: &[(&str, &str)],
    keys: [&str; N],
) -> Result<[u32; N], ParseError> {
    let mut out = [None; N];
    for (k, v) in attrs {
        let Some(i) = keys.iter().position(|key| key == k) else {
            return Err(malformed(line, format!("unknown attribute {k:?}")));
        };
        if out[i].is_some() {
            return Err(malformed(line, format!("attribute {k:?} given twice")));
        }
        out[i] = Some(parse_count(line, k, v)?);
    }
    Ok(out.map(|x| x.unwrap_or(0)))
}

fn parse_class_terms(line: usize, v: &str) -> Result<Vec<(BasisElement, BigInt)>, ParseError> {
    if v == "0" {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|term| {
            let (sym, coeff) = match term.split_once(':') {
                Some((s, c)) => (s, c),
                None => (term, "1"),
            };
            let e: BasisElement = sym
                .parse()
                .map_err(|_| malformed(line, format!("bad basis symbol {sym:?}")))?;
            let c: BigInt = coeff
                .parse()
                .map_err(|_| malformed(line, format!("bad coefficient {coeff:?}")))?;
            Ok((e, c))
        })
        .collect()
}

fn parse_slot(line: usize, s: &str) -> Result<ScarSlot, ParseError> {
    let bad = || malformed(line, format!("bad scar slot {s:?}, expected PIECE.SLOT"));
    let (p, k) = s.split_once('.').ok_or_else(bad)?;
    Ok(ScarSlot::new(
        p.parse().map_err(|_| bad())?,
        k.parse().map_err(|_| bad())?,
    ))
}

fn parse_piece_data(line: usize, v: &str) -> Result<TracedCurve, ParseError> {
    let parts: Vec<&str> = v.split('|').collect();
    let [a, b, sign] = parts.as_slice() else {
        return Err(malformed(
            line,
            format!("piece-data {v:?} should be P.S|Q.T|SIGN"),
        ));
    };
    let orient = match *sign {
        "+" => Orientation::Positive,
        "-" => Orientation::Negative,
        other => {
            return Err(malformed(
                line,
                format!("orientation sign {other:?} is not + or -"),
            ))
        }
    };
    Ok(TracedCurve::new(
        parse_slot(line, a)?,
        parse_slot(line, b)?,
        orient,
    ))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(|c: char| c.is_whitespace() || c == '[' || c == ']')
}

impl Raw {
    fn read(text: &str) -> Result<Raw, ParseError> {
        let mut raw = Raw::default();
        let mut section = Section::Preamble;
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let content = full.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if content.starts_with('[') {
                section = raw.header(line, content)?;
                continue;
            }
            let mut words = content.split_whitespace();
            let head = words.next().unwrap_or("");
            match section {
                Section::Preamble => {
                    return Err(malformed(line, "content before the first section"));
                }
                Section::Surface => {
                    return Err(malformed(
                        line,
                        "[surface] takes its attributes on the header line",
                    ));
                }
                Section::System => raw.system_line(line, head, words)?,
                Section::Page => raw.page_line(line, head, words)?,
                Section::Suture => {
                    let nums: Vec<&str> = words.collect();
                    let (Some(a), Some(b), true) = (
                        nums.first().and_then(|w| w.parse::<usize>().ok()),
                        nums.get(1).and_then(|w| w.parse::<usize>().ok()),
                        head == "pair" && nums.len() == 2,
                    ) else {
                        return Err(malformed(line, "suture lines read `pair I J`"));
                    };
                    raw.suture
                        .as_mut()
                        .expect("in suture section")
                        .1
                        .push((line, a, b));
                }
            }
        }
        Ok(raw)
    }

    fn header(&mut self, line: usize, content: &str) -> Result<Section, ParseError> {
        let Some(close) = content.find(']') else {
            return Err(malformed(line, "unterminated section header"));
        };
        let inner = content[1..close].trim();
        let rest = content[close + 1..].trim();
        let mut inner_words = inner.split_whitespace();
        let kind = inner_words.next().unwrap_or("");
        let name = inner_words.next();
        if inner_words.next().is_some() {
            return Err(malformed(line, format!("unexpected header [{inner}]")));
        }
        let dup = |what: &str| {
            perr(
                ParseErrorKind::DuplicateName,
                line,
                format!("duplicate [{what}] section"),
            )
        };
        match (kind, name) {
            ("surface", None) => {
                if self.surface.is_some() {
                    return Err(dup("surface"));
                }
                let attrs = attributes(line, rest.split_whitespace())?;
                let [genus, boundary] = counts(line, &attrs, ["genus", "boundary"])?;
                self.surface = Some((line, Surface::new(genus, boundary)));
                Ok(Section::Surface)
            }
            ("system", Some(name)) => {
                if !rest.is_empty() {
                    return Err(malformed(line, "trailing text after system header"));
                }
                if !valid_name(name) {
                    return Err(malformed(line, format!("bad system name {name:?}")));
                }
                if self.systems.iter().any(|s| s.name == name) {
                    return Err(perr(
                        ParseErrorKind::DuplicateName,
                        line,
                        format!("system name {name:?} used twice"),
                    ));
                }
                self.systems.push(RawSystem {
                    line,
                    name: name.to_string(),
                    pieces: Vec::new(),
                    curves: Vec::new(),
                });
                Ok(Section::System)
            }
            ("page", None) | ("suture", None) if !rest.is_empty() => {
                Err(malformed(line, format!("trailing text after [{kind}]")))
            }
            ("page", None) => {
                if self.page.is_some() {
                    return Err(dup("page"));
                }
                self.page = Some((line, Vec::new(), false));
                Ok(Section::Page)
            }
            ("suture", None) => {
                if self.suture.is_some() {
                    return Err(dup("suture"));
                }
                self.suture = Some((line, Vec::new()));
                Ok(Section::Suture)
            }
            _ => Err(malformed(line, format!("unknown section [{inner}]"))),
        }
    }

    fn system_line<'a>(
        &mut self,
        line: usize,
        head: &str,
        mut words: impl Iterator<Item = &'a str>,
    ) -> Result<(), ParseError> {
        let sys = self.systems.last_mut().expect("in system section");
        match head {
            "piece" => {
                let attrs = attributes(line, words)?;
                let [genus, scars, boundary] =
                    counts(line, &attrs, ["genus", "scars", "boundary"])?;
                sys.pieces.push(Piece::new(genus, scars, boundary));
            }
            "curve" => {
                let name = words
                    .next()
                    .filter(|n| valid_name(n) && !n.contains('='))
                    .ok_or_else(|| malformed(line, "curve needs a name"))?;
                if sys.curves.iter().any(|c| c.name == name) {
                    return Err(perr(
                        ParseErrorKind::DuplicateName,
                        line,
                        format!("curve name {name:?} used twice in system {:?}", sys.name),
                    ));
                }
                let mut terms = None;
                let mut glue = None;
                for (k, v) in attributes(line, words)? {
                    match k {
                        "class" if terms.is_none() => terms = Some(parse_class_terms(line, v)?),
                        "piece-data" if glue.is_none() => glue = Some(parse_piece_data(line, v)?),
                        _ => {
                            return Err(malformed(
                                line,
                                format!("unexpected or repeated attribute {k:?}"),
                            ))
                        }
                    }
                }
                let (Some(terms), Some(glue)) = (terms, glue) else {
                    return Err(malformed(line, "curve needs class= and piece-data="));
                };
                sys.curves.push(RawCurve {
                    line,
                    name: name.to_string(),
                    terms,
                    glue,
                });
            }
            other => return Err(malformed(line, format!("unknown system entry {other:?}"))),
        }
        Ok(())
    }

    fn page_line<'a>(
        &mut self,
        line: usize,
        head: &str,
        words: impl Iterator<Item = &'a str>,
    ) -> Result<(), ParseError> {
        let page = self.page.as_mut().expect("in page section");
        match head {
            "empty" => {
                if page.2 || !page.1.is_empty() || words.count() > 0 {
                    return Err(malformed(line, "`empty` must be the only page entry"));
                }
                page.2 = true;
            }
            "component" => {
                if page.2 {
                    return Err(malformed(line, "page already declared empty"));
                }
                let attrs = attributes(line, words)?;
                let [genus, boundary] = counts(line, &attrs, ["genus", "boundary"])?;
                page.1.push(Surface::new(genus, boundary));
            }
            other => return Err(malformed(line, format!("unknown page entry {other:?}"))),
        }
        Ok(())
    }
}

/// Parses a diagram file. Never panics; every failure carries a line.
pub fn parse_diagram_file(text: &str) -> Result<MultisectionDiagram, ParseError> {
    let raw = Raw::read(text)?;
    let eof = text.lines().count() + 1;
    let invalid = |line: usize, m: String| perr(ParseErrorKind::InvalidStructure, line, m);

    let (surface_line, surface) = raw.surface.ok_or_else(|| {
        perr(
            ParseErrorKind::MissingSection,
            eof,
            "missing [surface] section",
        )
    })?;
    let (_, page_components, _) = raw.page.ok_or_else(|| {
        perr(
            ParseErrorKind::MissingSection,
            eof,
            "missing [page] section",
        )
    })?;
    let page = SurfaceCollection::new(page_components);

    let mut systems = Vec::with_capacity(raw.systems.len());
    let mut names = Vec::with_capacity(raw.systems.len());
    for sys in raw.systems {
        let mut classes = Vec::with_capacity(sys.curves.len());
        for c in &sys.curves {
            let mut class = CurveClass::zero(surface);
            for (e, coeff) in &c.terms {
                let i = surface.basis_index(*e).map_err(|_| {
                    perr(
                        ParseErrorKind::BasisOutOfRange,
                        c.line,
                        format!("basis element {e} does not exist on a genus-{} surface with {} boundary circles", surface.genus, surface.boundary),
                    )
                })?;
                let mut coeffs = class.coefficients().to_vec();
                coeffs[i] += coeff;
                class = CurveClass::new(surface, coeffs).expect("length preserved");
            }
            classes.push(class);
        }
        let trace = if sys.pieces.is_empty() && sys.curves.is_empty() {
            TracedMulticurve::uncut(surface)
        } else {
            TracedMulticurve::new(sys.pieces, sys.curves.iter().map(|c| c.glue).collect())
        };
        let curve_names = sys.curves.iter().map(|c| c.name.clone()).collect();
        let cs = CutSystem::new(surface, trace, classes)
            .and_then(|cs| cs.with_curve_names(curve_names))
            .map_err(|e| invalid(sys.line, format!("system {:?}: {e}", sys.name)))?;
        systems.push(cs);
        names.push(sys.name);
    }

    let b = surface.boundary as usize;
    let suture = match raw.suture {
        None if b == 0 => Vec::new(),
        None => {
            return Err(perr(
                ParseErrorKind::MissingSection,
                eof,
                "missing [suture] section for a surface with boundary",
            ))
        }
        Some((line, pairs)) => {
            let mut map: Vec<Option<usize>> = vec![None; b];
            for (pl, s, p) in pairs {
                let slot = map.get_mut(s).ok_or_else(|| {
                    invalid(pl, format!("surface boundary circle {s} does not exist"))
                })?;
                if slot.replace(p).is_some() {
                    return Err(invalid(
                        pl,
                        format!("surface boundary circle {s} paired twice"),
                    ));
                }
            }
            map.into_iter()
                .enumerate()
                .map(|(i, p)| {
                    p.ok_or_else(|| {
                        invalid(line, format!("surface boundary circle {i} is unpaired"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    MultisectionDiagram::new(surface, systems, page, suture)
        .and_then(|d| d.with_names(names))
        .map_err(|e| invalid(surface_line, e.to_string()))
}

/// Writes `d` in the diagram file format; [`parse_diagram_file`] reads it
/// back to an equal value.
pub fn serialize_diagram(d: &MultisectionDiagram) -> String {
    let mut out = String::new();
    let s = d.surface();
    writeln!(out, "[surface] genus={} boundary={}", s.genus, s.boundary).unwrap();
    for (name, cs) in d.names().iter().zip(d.systems()) {
        writeln!(out, "\n[system {name}]").unwrap();
        for p in &cs.trace().pieces {
            writeln!(
                out,
                "piece genus={} scars={} boundary={}",
                p.genus, p.scars, p.boundary
            )
            .unwrap();
        }
        for ((curve, class), cname) in cs
            .trace()
            .curves
            .iter()
            .zip(cs.classes())
            .zip(cs.curve_names())
        {
            writeln!(
                out,
                "curve {cname} class={class} piece-data={}|{}|{}",
                curve.sides[0],
                curve.sides[1],
                curve.orient.symbol()
            )
            .unwrap();
        }
    }
    writeln!(out, "\n[page]").unwrap();
    if d.page().is_empty() {
        writeln!(out, "empty").unwrap();
    }
    for c in d.page().components() {
        writeln!(out, "component genus={} boundary={}", c.genus, c.boundary).unwrap();
    }
    writeln!(out, "\n[suture]").unwrap();
    for (i, p) in d.suture().iter().enumerate() {
        writeln!(out, "pair {i} {p}").unwrap();
    }
    out
}
