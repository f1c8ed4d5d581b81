//! Image file formats and the machine-readable result document.
//!
//! Grid and PBM inputs are two-dimensional: the character in row `r`, column
//! `c` becomes the point `(c, r)` (origin top-left, `y` growing downward).
//! Homology does not see the orientation, so the convention is only a label.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::axioms::AxiomReport;
use crate::error::{Error, Result};
use crate::homology::HomologyGroup;
use crate::image::{components, Adjacency, DigitalImage, Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Rows of `0`/`1` or `.`/`#`.
    Grid,
    /// Plain (`P1`) portable bitmap; `1` is foreground.
    Pbm,
    /// `dim d`, then one point per line as `d` integers.
    Points,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Format::Grid),
            "pbm" => Ok(Format::Pbm),
            "points" => Ok(Format::Points),
            _ => Err(Error::malformed(format!("unknown format {s:?}"))),
        }
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn require_planar(adjacency: Adjacency, format: &str) -> Result<()> {
    if adjacency.dim() != 2 {
        return Err(Error::domain(format!(
            "{format} input is two-dimensional but the adjacency is for dimension {}",
            adjacency.dim()
        )));
    }
    Ok(())
}

/// Dimension an input declares: 2 for grid and PBM, the header for points.
pub fn declared_dim(format: Format, text: &str) -> Result<usize> {
    if format != Format::Points {
        return Ok(2);
    }
    for (r, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        return match (words.next(), words.next().map(str::parse::<usize>), words.next()) {
            (Some("dim"), Some(Ok(d)), None) => Ok(d),
            _ => Err(parse_err(r + 1, 1, "expected a header `dim d`")),
        };
    }
    Err(parse_err(1, 1, "missing header `dim d`"))
}

pub fn load_image(format: Format, text: &str, adjacency: Adjacency) -> Result<DigitalImage> {
    let points = match format {
        Format::Grid => parse_grid(text, adjacency)?,
        Format::Pbm => parse_pbm(text, adjacency)?,
        Format::Points => parse_points(text, adjacency)?,
    };
    DigitalImage::new(adjacency, points)
}

fn parse_grid(text: &str, adjacency: Adjacency) -> Result<Vec<Point>> {
    require_planar(adjacency, "grid")?;
    let mut out = Vec::new();
    for (r, line) in text.lines().enumerate() {
        for (c, ch) in line.trim_end_matches('\r').chars().enumerate() {
            match ch {
                '1' | '#' => out.push(Point::from([c as i64, r as i64])),
                '0' | '.' => {}
                _ => return Err(parse_err(r + 1, c + 1, format!("unexpected character {ch:?} in grid"))),
            }
        }
    }
    Ok(out)
}

/// Characters of a PBM file with positions, comments removed.
fn pbm_chars(text: &str) -> impl Iterator<Item = (usize, usize, char)> + '_ {
    text.lines().enumerate().flat_map(|(r, line)| {
        let body = line.split('#').next().unwrap_or("");
        let end = body.chars().count() + 1;
        body.chars()
            .enumerate()
            .map(move |(c, ch)| (r + 1, c + 1, ch))
            .chain(std::iter::once((r + 1, end, '\n')))
    })
}

fn parse_pbm(text: &str, adjacency: Adjacency) -> Result<Vec<Point>> {
    require_planar(adjacency, "pbm")?;
    let mut chars = pbm_chars(text).peekable();
    let mut token = |what: &str| -> Result<(usize, usize, String)> {
        while chars.peek().is_some_and(|(_, _, ch)| ch.is_whitespace()) {
            chars.next();
        }
        let Some(&(line, column, _)) = chars.peek() else {
            return Err(parse_err(text.lines().count().max(1), 1, format!("missing {what}")));
        };
        let mut s = String::new();
        while let Some(&(_, _, ch)) = chars.peek() {
            if ch.is_whitespace() {
                break;
            }
            s.push(ch);
            chars.next();
        }
        Ok((line, column, s))
    };
    let (l, c, magic) = token("magic number")?;
    if magic != "P1" {
        return Err(parse_err(l, c, format!("expected P1, found {magic:?}")));
    }
    let mut size = |what: &str| -> Result<usize> {
        let (l, c, s) = token(what)?;
        s.parse().map_err(|_| parse_err(l, c, format!("invalid {what} {s:?}")))
    };
    let width = size("width")?;
    let height = size("height")?;
    let mut out = Vec::new();
    let mut k = 0usize;
    for (line, column, ch) in chars {
        match ch {
            _ if ch.is_whitespace() => continue,
            '0' | '1' if k < width * height => {
                if ch == '1' {
                    out.push(Point::from([(k % width) as i64, (k / width) as i64]));
                }
                k += 1;
            }
            '0' | '1' => return Err(parse_err(line, column, "more pixels than width × height")),
            _ => return Err(parse_err(line, column, format!("unexpected character {ch:?} in bitmap"))),
        }
    }
    if k != width * height {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!("expected {} pixels, found {k}", width * height),
        ));
    }
    Ok(out)
}

fn parse_points(text: &str, adjacency: Adjacency) -> Result<Vec<Point>> {
    let mut dim = None;
    let mut seen = PointSet::new();
    let mut out = Vec::new();
    for (r, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let words: Vec<(usize, &str)> = line
            .char_indices()
            .filter(|&(i, ch)| !ch.is_whitespace() && (i == 0 || line[..i].ends_with(char::is_whitespace)))
            .map(|(i, _)| (i + 1, line[i..].split_whitespace().next().expect("non-empty word")))
            .collect();
        let Some(d) = dim else {
            let [(_, "dim"), (c, n)] = words[..] else {
                return Err(parse_err(r + 1, words[0].0, "expected a header `dim d`"));
            };
            let d: usize = n.parse().map_err(|_| parse_err(r + 1, c, format!("invalid dimension {n:?}")))?;
            if d != adjacency.dim() {
                return Err(Error::domain(format!(
                    "points are {d}-dimensional but the adjacency is for dimension {}",
                    adjacency.dim()
                )));
            }
            dim = Some(d);
            continue;
        };
        if words.len() != d {
            let c = words.get(d).map_or(line.len() + 1, |w| w.0);
            return Err(parse_err(r + 1, c, format!("expected {d} coordinates, found {}", words.len())));
        }
        let coords = words
            .iter()
            .map(|&(c, w)| w.parse::<i64>().map_err(|_| parse_err(r + 1, c, format!("invalid coordinate {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let p = Point::from(coords);
        if !seen.insert(p.clone()) {
            return Err(parse_err(r + 1, words[0].0, format!("duplicate point {p}")));
        }
        out.push(p);
    }
    if dim.is_none() {
        return Err(parse_err(1, 1, "missing header `dim d`"));
    }
    Ok(out)
}

/// The image in points format; [`load_image`] reads it back to an equal image.
pub fn write_points(image: &DigitalImage) -> String {
    let mut s = format!("dim {}\n", image.dim());
    for p in image.points() {
        let coords: Vec<String> = p.coords().iter().map(i64::to_string).collect();
        writeln!(s, "{}", coords.join(" ")).expect("writing to a string");
    }
    s
}

/// Lowercase hex SHA-256 of the raw input bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").expect("writing to a string");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyInfo {
    pub dim: usize,
    pub l: usize,
    pub kappa: u64,
}

impl From<Adjacency> for AdjacencyInfo {
    fn from(a: Adjacency) -> Self {
        AdjacencyInfo {
            dim: a.dim(),
            l: a.l(),
            kappa: a.kappa(),
        }
    }
}

/// One JSON object per run. Keys are stable; absent parts are `null` or empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    pub command: String,
    pub adjacency: AdjacencyInfo,
    pub points: usize,
    pub components: usize,
    pub max_dim: usize,
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<i64>>,
    /// Command-specific payload (Hurewicz class, excision depth, …).
    pub result: Value,
    pub reports: Vec<AxiomReport>,
    pub timing_ms: f64,
    pub input_digest: String,
}

impl ResultDocument {
    pub fn new(command: &str, image: &DigitalImage, max_dim: usize, input: &[u8]) -> Self {
        ResultDocument {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            adjacency: image.adjacency().into(),
            points: image.len(),
            components: components(image).len(),
            max_dim,
            betti: Vec::new(),
            torsion: Vec::new(),
            result: Value::Null,
            reports: Vec::new(),
            timing_ms: 0.0,
            input_digest: input_digest(input),
        }
    }

    pub fn with_groups(mut self, groups: &[HomologyGroup]) -> Self {
        self.betti = groups.iter().map(HomologyGroup::betti).collect();
        self.torsion = groups.iter().map(|g| g.torsion().to_vec()).collect();
        self
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(AxiomReport::passed)
    }
}
