use std::fmt;

use num_complex::Complex64;

use crate::model::{ComplexSweep, FrequencyGrid, ModelError, SweepRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            Self::Hz => 1.0,
            Self::KHz => 1e3,
            Self::MHz => 1e6,
            Self::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Self::Hz => "Hz",
            Self::KHz => "kHz",
            Self::MHz => "MHz",
            Self::GHz => "GHz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real / imaginary.
    RI,
    /// Linear magnitude / angle in degrees.
    MA,
    /// dB magnitude / angle in degrees.
    DB,
}

impl DataFormat {
    fn token(self) -> &'static str {
        match self {
            Self::RI => "RI",
            Self::MA => "MA",
            Self::DB => "DB",
        }
    }

    fn to_complex(self, a: f64, b: f64) -> Complex64 {
        match self {
            Self::RI => Complex64::new(a, b),
            Self::MA => Complex64::from_polar(a, b.to_radians()),
            Self::DB => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TouchstoneErrorKind {
    InvalidUtf8,
    UnknownOption(String),
    UnsupportedParameter(String),
    MissingResistance,
    DuplicateOptionLine,
    OptionAfterData,
    Version2,
    BadNumber(String),
    ColumnCount(usize),
    NonMonotone { previous: f64, got: f64 },
    NoData,
    Grid(String),
}

impl fmt::Display for TouchstoneErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidUtf8 => write!(f, "input is not valid UTF-8"),
            Self::UnknownOption(t) => write!(f, "unknown option token '{t}'"),
            Self::UnsupportedParameter(t) => write!(f, "parameter type '{t}' not supported (only S)"),
            Self::MissingResistance => write!(f, "option 'R' needs a reference resistance"),
            Self::DuplicateOptionLine => write!(f, "second option line"),
            Self::OptionAfterData => write!(f, "option line after data"),
            Self::Version2 => write!(f, "Touchstone v2 keywords are not supported"),
            Self::BadNumber(t) => write!(f, "'{t}' is not a finite number"),
            Self::ColumnCount(n) => write!(f, "expected 9 values (frequency + 4 complex pairs), found {n}"),
            Self::NonMonotone { previous, got } => write!(
                f,
                "frequency {got} does not increase past {previous} (noise parameter data is not supported)"
            ),
            Self::NoData => write!(f, "no data rows"),
            Self::Grid(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct TouchstoneError {
    pub line: usize,
    pub column: usize,
    pub kind: TouchstoneErrorKind,
}

/// One frequency row: frequency in the file unit and S11, S21, S12, S22 as
/// raw value pairs in the file format.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneRow {
    pub frequency: f64,
    pub values: [f64; 8],
}

/// Two-port Touchstone v1 content, values kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneFile {
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    pub reference_ohms: f64,
    pub comments: Vec<String>,
    pub rows: Vec<TouchstoneRow>,
}

/// The four S-parameters of a two-port sweep on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPort {
    pub s11: ComplexSweep,
    pub s21: ComplexSweep,
    pub s12: ComplexSweep,
    pub s22: ComplexSweep,
}

impl TwoPort {
    /// Transmission-only two-port: `S21 = S12 = s21`, no reflections.
    pub fn from_s21(s21: ComplexSweep) -> Self {
        let zero = ComplexSweep::zeros(*s21.grid(), s21.role());
        Self { s11: zero.clone(), s12: s21.clone(), s21, s22: zero }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.s21.grid()
    }

    pub fn map(&self, mut f: impl FnMut(&ComplexSweep) -> Result<ComplexSweep, ModelError>) -> Result<Self, ModelError> {
        Ok(Self { s11: f(&self.s11)?, s21: f(&self.s21)?, s12: f(&self.s12)?, s22: f(&self.s22)? })
    }
}

fn err(line: usize, column: usize, kind: TouchstoneErrorKind) -> TouchstoneError {
    TouchstoneError { line, column, kind }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn number(tok: &str, line: usize, col: usize) -> Result<f64, TouchstoneError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(line, col, TouchstoneErrorKind::BadNumber(tok.to_string()))),
    }
}

impl TouchstoneFile {
    pub fn parse(text: &str) -> Result<Self, TouchstoneError> {
        let mut unit = FrequencyUnit::GHz;
        let mut format = DataFormat::MA;
        let mut reference_ohms = 50.0;
        let mut seen_option = false;
        let mut comments = Vec::new();
        let mut rows: Vec<TouchstoneRow> = Vec::new();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            last_line = ln;
            let (body, comment) = match raw.find('!') {
                Some(p) => (&raw[..p], Some(&raw[p + 1..])),
                None => (raw, None),
            };
            if let Some(c) = comment {
                comments.push(c.trim_end().to_string());
            }
            let toks = tokens(body);
            let Some(&(first_col, first)) = toks.first() else { continue };

            if first.starts_with('[') {
                return Err(err(ln, first_col, TouchstoneErrorKind::Version2));
            }
            if let Some(rest) = first.strip_prefix('#') {
                if seen_option {
                    return Err(err(ln, first_col, TouchstoneErrorKind::DuplicateOptionLine));
                }
                if !rows.is_empty() {
                    return Err(err(ln, first_col, TouchstoneErrorKind::OptionAfterData));
                }
                seen_option = true;
                let mut opts: Vec<(usize, &str)> = Vec::new();
                if !rest.is_empty() {
                    opts.push((first_col + 1, rest));
                }
                opts.extend(toks[1..].iter().copied());
                let mut it = opts.into_iter();
                while let Some((col, tok)) = it.next() {
                    match tok.to_ascii_uppercase().as_str() {
                        "HZ" => unit = FrequencyUnit::Hz,
                        "KHZ" => unit = FrequencyUnit::KHz,
                        "MHZ" => unit = FrequencyUnit::MHz,
                        "GHZ" => unit = FrequencyUnit::GHz,
                        "S" => {}
                        "Y" | "Z" | "H" | "G" => {
                            return Err(err(ln, col, TouchstoneErrorKind::UnsupportedParameter(tok.to_string())))
                        }
                        "RI" => format = DataFormat::RI,
                        "MA" => format = DataFormat::MA,
                        "DB" => format = DataFormat::DB,
                        "R" => {
                            let (vcol, v) = it.next().ok_or(err(ln, col, TouchstoneErrorKind::MissingResistance))?;
                            reference_ohms = number(v, ln, vcol)?;
                        }
                        _ => return Err(err(ln, col, TouchstoneErrorKind::UnknownOption(tok.to_string()))),
                    }
                }
                continue;
            }

            if toks.len() != 9 {
                let col = toks.get(9).map_or(toks[toks.len() - 1].0, |t| t.0);
                return Err(err(ln, col, TouchstoneErrorKind::ColumnCount(toks.len())));
            }
            let frequency = number(toks[0].1, ln, toks[0].0)?;
            let mut values = [0.0; 8];
            for (k, &(col, tok)) in toks[1..].iter().enumerate() {
                values[k] = number(tok, ln, col)?;
            }
            if let Some(prev) = rows.last() {
                if frequency <= prev.frequency {
                    return Err(err(
                        ln,
                        toks[0].0,
                        TouchstoneErrorKind::NonMonotone { previous: prev.frequency, got: frequency },
                    ));
                }
            }
            rows.push(TouchstoneRow { frequency, values });
        }
        if rows.is_empty() {
            return Err(err(last_line.max(1), 1, TouchstoneErrorKind::NoData));
        }
        Ok(Self { unit, format, reference_ohms, comments, rows })
    }

    pub fn frequencies_hz(&self) -> Vec<f64> {
        let m = self.unit.multiplier();
        self.rows.iter().map(|r| r.frequency * m).collect()
    }

    /// Canonical text: comments, option line, one row per frequency, values
    /// in shortest round-trip notation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push('!');
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!(
            "# {} S {} R {:?}\n",
            self.unit.token(),
            self.format.token(),
            self.reference_ohms
        ));
        for r in &self.rows {
            out.push_str(&format!("{:?}", r.frequency));
            for v in &r.values {
                out.push_str(&format!(" {v:?}"));
            }
            out.push('\n');
        }
        out
    }

    /// Converts to complex sweeps on a uniform grid.
    pub fn to_two_port(&self, role: SweepRole) -> Result<TwoPort, TouchstoneError> {
        let grid = FrequencyGrid::from_frequencies(&self.frequencies_hz())
            .map_err(|e| err(1, 1, TouchstoneErrorKind::Grid(e.to_string())))?;
        let channel = |k: usize| {
            let v = self.rows.iter().map(|r| self.format.to_complex(r.values[2 * k], r.values[2 * k + 1])).collect();
            ComplexSweep::new(grid, v, role).map_err(|e| err(1, 1, TouchstoneErrorKind::Grid(e.to_string())))
        };
        Ok(TwoPort { s11: channel(0)?, s21: channel(1)?, s12: channel(2)?, s22: channel(3)? })
    }

    /// RI-format file from complex sweeps.
    pub fn from_two_port(tp: &TwoPort, unit: FrequencyUnit, comments: Vec<String>) -> Self {
        let m = unit.multiplier();
        let rows = tp
            .grid()
            .frequencies()
            .enumerate()
            .map(|(i, f)| {
                let c = [tp.s11.values()[i], tp.s21.values()[i], tp.s12.values()[i], tp.s22.values()[i]];
                TouchstoneRow {
                    frequency: f / m,
                    values: [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, c[3].re, c[3].im],
                }
            })
            .collect();
        Self { unit, format: DataFormat::RI, reference_ohms: 50.0, comments, rows }
    }
}

/// Parses a v1 two-port file into its four S-parameter sweeps.
pub fn parse_touchstone(text: &str) -> Result<TwoPort, TouchstoneError> {
    TouchstoneFile::parse(text)?.to_two_port(SweepRole::Target)
}

/// Byte-level entry point; never panics on arbitrary input.
pub fn parse_touchstone_bytes(bytes: &[u8]) -> Result<TouchstoneFile, TouchstoneError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => TouchstoneFile::parse(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let (line, column) = crate::io::line_col(valid, valid.len());
            Err(err(line, column, TouchstoneErrorKind::InvalidUtf8))
        }
    }
}

/// RI / GHz text for a two-port.
pub fn emit_touchstone(tp: &TwoPort) -> String {
    TouchstoneFile::from_two_port(tp, FrequencyUnit::GHz, Vec::new()).to_text()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ri_row_maps_s21() {
        let tp = parse_touchstone("# GHz S RI R 50\n76 0 0 0.5 0.5 0 0 0 0\n77 0 0 0 0 0 0 0 0\n").unwrap();
        assert_eq!(tp.s21.values()[0], Complex64::new(0.5, 0.5));
        assert_eq!(tp.grid().f_start(), 76e9);
    }

    #[test]
    fn db_format() {
        let f = TouchstoneFile::parse("# GHz S DB R 50\n76 0 0 -36.02 0 0 0 0 0\n77 0 0 -36.02 0 0 0 0 0\n").unwrap();
        let tp = f.to_two_port(SweepRole::Cal).unwrap();
        assert!((tp.s21.values()[0].norm() - 10f64.powf(-36.02 / 20.0)).abs() < 1e-15);
        assert_eq!(tp.s21.values()[0].im, 0.0);
    }

    #[test]
    fn ma_format_and_defaults() {
        let f = TouchstoneFile::parse("! no option line\n1 0 0 2 90 0 0 0 0\n2 0 0 2 90 0 0 0 0\n").unwrap();
        assert_eq!((f.unit, f.format, f.reference_ohms), (FrequencyUnit::GHz, DataFormat::MA, 50.0));
        let tp = f.to_two_port(SweepRole::Cal).unwrap();
        assert!((tp.s21.values()[0] - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(f.comments, vec![" no option line".to_string()]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = TouchstoneFile::parse("# GHz S XX R 50\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(matches!(e.kind, TouchstoneErrorKind::UnknownOption(_)));

        let e = TouchstoneFile::parse("# GHz S RI R 50\n1 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert!(matches!(e.kind, TouchstoneErrorKind::NonMonotone { .. }));

        let e = TouchstoneFile::parse("# GHz S RI R 50\n1 0 0 0 0 0 0 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, TouchstoneErrorKind::ColumnCount(8));

        let e = TouchstoneFile::parse("# GHz S RI R 50\n1 0 0 0 x 0 0 0 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));

        let e = TouchstoneFile::parse("[Version] 2.0\n").unwrap_err();
        assert_eq!(e.kind, TouchstoneErrorKind::Version2);
        assert!(TouchstoneFile::parse("# GHz Z RI\n").is_err());
        assert!(TouchstoneFile::parse("# GHz S RI R\n").is_err());
        assert!(TouchstoneFile::parse("# GHz S RI R 50\n1 inf 0 0 0 0 0 0 0\n").is_err());
        assert_eq!(TouchstoneFile::parse("").unwrap_err().kind, TouchstoneErrorKind::NoData);
        assert!(parse_touchstone_bytes(&[b'#', 0xff, 0xfe]).is_err());
    }

    #[test]
    fn noise_block_is_rejected() {
        let text = "# GHz S RI R 50\n1 0 0 0 0 0 0 0 0\n2 0 0 0 0 0 0 0 0\n1 1.5 0.3 10 0.2\n";
        assert!(TouchstoneFile::parse(text).is_err());
    }

    #[test]
    fn emit_then_parse() {
        let grid = FrequencyGrid::default();
        let s21 = ComplexSweep::from_fn(grid, SweepRole::Cal, |i, _| Complex64::new(1e-3 * i as f64, -0.1 / (1.0 + i as f64))).unwrap();
        let tp = TwoPort::from_s21(s21);
        let text = emit_touchstone(&tp);
        assert!(text.starts_with("# GHz S RI R 50.0\n76.0 0.0 0.0 0.0 -0.1 0.0 -0.1 0.0 0.0\n"));
        let back = parse_touchstone(&text).unwrap();
        assert_eq!(back.s21.values(), tp.s21.values());
        assert!(back.grid().approx_eq(tp.grid()));
    }

    fn row_strategy() -> impl Strategy<Value = [f64; 8]> {
        prop::array::uniform8(prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3f64..1e3])
    }

    proptest! {
        #[test]
        fn text_round_trip_is_exact(
            unit in prop_oneof![Just(FrequencyUnit::Hz), Just(FrequencyUnit::KHz), Just(FrequencyUnit::MHz), Just(FrequencyUnit::GHz)],
            format in prop_oneof![Just(DataFormat::RI), Just(DataFormat::MA), Just(DataFormat::DB)],
            start in 1e-3f64..1e6,
            steps in prop::collection::vec(1e-6f64..10.0, 1..20),
            rows in prop::collection::vec(row_strategy(), 20),
        ) {
            let mut f = start;
            let rows: Vec<TouchstoneRow> = steps.iter().zip(&rows).map(|(s, v)| { f += s; TouchstoneRow { frequency: f, values: *v } }).collect();
            let file = TouchstoneFile { unit, format, reference_ohms: 50.0, comments: vec![" generated".into()], rows };
            let text = file.to_text();
            let back = TouchstoneFile::parse(&text).unwrap();
            prop_assert_eq!(&back, &file);
            prop_assert_eq!(back.to_text(), text);
        }

        #[test]
        fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
            let _ = parse_touchstone_bytes(&bytes);
        }
    }
}
