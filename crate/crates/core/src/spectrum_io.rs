//! Length spectrum files: newline-delimited JSON, one header line followed
//! by one record per class. Matrices are not stored; they are recomputed
//! from the words on load and checked against the stored traces.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{
    enumerate_spectrum, set_multiplicities, ArithmeticMode, Completeness, EnumOptions, EnumStats, GeodesicClass,
    GroupSpec, LengthSpectrum, TraceValue,
};
use crate::presentation::Word;
use crate::qsqrt2::QSqrt2;

pub const SPECTRUM_SCHEMA_VERSION: u32 = 1;
pub const SPECTRUM_FORMAT: &str = "twzeta-spectrum";
/// Environment variable naming the spectrum cache directory.
pub const CACHE_DIR_ENV: &str = "TWZETA_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumHeader {
    pub format: String,
    pub schema_version: u32,
    pub group: String,
    pub genus: usize,
    pub mode: ArithmeticMode,
    pub cutoff: f64,
    pub options: EnumOptions,
    pub completeness: Completeness,
    pub stats: EnumStats,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub word: Word,
    pub trace: TraceValue,
    pub length: f64,
    pub primitive: bool,
    pub power_index: u32,
}

pub fn header(sp: &LengthSpectrum) -> SpectrumHeader {
    SpectrumHeader {
        format: SPECTRUM_FORMAT.into(),
        schema_version: SPECTRUM_SCHEMA_VERSION,
        group: sp.group_id.clone(),
        genus: sp.genus,
        mode: sp.mode,
        cutoff: sp.cutoff,
        options: sp.options,
        completeness: sp.completeness,
        stats: sp.stats,
        classes: sp.classes.len(),
    }
}

pub fn write_ndjson<W: Write>(sp: &LengthSpectrum, mut w: W) -> Result<()> {
    serde_json::to_writer(&mut w, &header(sp))?;
    w.write_all(b"\n")?;
    for c in &sp.classes {
        let rec = ClassRecord {
            word: c.word.clone(),
            trace: c.trace.clone(),
            length: c.length,
            primitive: c.primitive,
            power_index: c.power_index,
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn corrupt(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("spectrum file line {line}: {msg}"))
}

pub fn read_ndjson<R: BufRead>(r: R) -> Result<LengthSpectrum> {
    let mut lines = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty spectrum file".into()))?;
    let h: SpectrumHeader = serde_json::from_str(&first?).map_err(|e| corrupt(1, e))?;
    if h.format != SPECTRUM_FORMAT || h.schema_version != SPECTRUM_SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported spectrum file ({} v{}; expected {SPECTRUM_FORMAT} v{SPECTRUM_SCHEMA_VERSION})",
            h.format, h.schema_version
        )));
    }
    let spec: GroupSpec = h.group.parse()?;
    let group = spec.build(h.mode)?;
    if group.genus != h.genus {
        return Err(corrupt(1, format!("genus {} does not match group {}", h.genus, h.group)));
    }
    let mut classes = Vec::with_capacity(h.classes);
    for (i, line) in lines {
        let rec: ClassRecord = serde_json::from_str(&line?).map_err(|e| corrupt(i + 1, e))?;
        let matrix = group.evaluate(&rec.word).map_err(|e| corrupt(i + 1, e))?;
        let ok = match (&rec.trace, matrix.exact_trace()) {
            (TraceValue::Exact(t), Some(exact)) => {
                QSqrt2::try_from(t.clone()).map_err(|e| corrupt(i + 1, e))? == exact
            }
            (TraceValue::Float(t), None) => (t - matrix.abs_trace()).abs() <= 1e-9 * t.max(1.0),
            _ => false,
        };
        let length = crate::fuchsian::translation_length(&matrix).map_err(|e| corrupt(i + 1, e))?;
        if !ok || (length - rec.length).abs() > 1e-12 * length {
            return Err(corrupt(i + 1, format!("word {} does not reproduce the stored trace and length", rec.word)));
        }
        classes.push(GeodesicClass {
            word: rec.word,
            matrix,
            trace: rec.trace,
            length: rec.length,
            primitive: rec.primitive,
            power_index: rec.power_index,
            multiplicity: 1,
        });
    }
    if classes.len() != h.classes {
        return Err(Error::Parse(format!("header announces {} classes, file has {}", h.classes, classes.len())));
    }
    set_multiplicities(&mut classes);
    Ok(LengthSpectrum {
        group_id: h.group,
        genus: h.genus,
        mode: h.mode,
        cutoff: h.cutoff,
        classes,
        options: h.options,
        completeness: h.completeness,
        stats: h.stats,
    })
}

pub fn save(sp: &LengthSpectrum, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    // Write beside the target and rename so readers never see a partial file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    write_ndjson(sp, BufWriter::new(fs::File::create(&tmp)?))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<LengthSpectrum> {
    let f = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_ndjson(BufReader::new(f))
}

/// Cache file name for `(group, L, N, R, mode)`.
pub fn cache_file_name(group: GroupSpec, cutoff: f64, opts: &EnumOptions, mode: ArithmeticMode) -> String {
    let g = group.to_string().replace(':', "-");
    format!("{g}_L{cutoff}_N{}_R{}_{mode}.ndjson", opts.max_depth, opts.conj_radius)
}

/// Loads the spectrum from `dir` when cached, otherwise enumerates and
/// stores it. Returns whether the cache was hit.
pub fn cached_spectrum(
    dir: &Path,
    group: GroupSpec,
    mode: ArithmeticMode,
    cutoff: f64,
    opts: &EnumOptions,
) -> Result<(LengthSpectrum, bool, PathBuf)> {
    let path = dir.join(cache_file_name(group, cutoff, opts, mode));
    if path.exists() {
        return Ok((load(&path)?, true, path));
    }
    let sp = enumerate_spectrum(&group.build(mode)?, cutoff, opts)?;
    save(&sp, &path)?;
    Ok((sp, false, path))
}

#[derive(Serialize)]
struct CsvRow {
    index: usize,
    word: String,
    length: f64,
    trace: String,
    primitive: bool,
    power_index: u32,
    multiplicity: u32,
}

/// One row per class: index, word, length, trace, primitive, power index,
/// multiplicity.
pub fn write_csv<W: Write>(sp: &LengthSpectrum, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (i, c) in sp.classes.iter().enumerate() {
        let trace = match &c.trace {
            TraceValue::Exact(t) => format!("{}+{}*sqrt2", t.rational, t.sqrt2),
            TraceValue::Float(t) => format!("{t}"),
        };
        out.serialize(CsvRow {
            index: i,
            word: c.word.to_string(),
            length: c.length,
            trace,
            primitive: c.primitive,
            power_index: c.power_index,
            multiplicity: c.multiplicity,
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_group;

    #[test]
    fn roundtrip_exact_and_float() {
        for g in [bolza_group(), bolza_group().to_float()] {
            let sp = enumerate_spectrum(&g, 4.0, &EnumOptions::default()).unwrap();
            let mut buf = Vec::new();
            write_ndjson(&sp, &mut buf).unwrap();
            let back = read_ndjson(&buf[..]).unwrap();
            assert_eq!(back.classes.len(), sp.classes.len());
            for (a, b) in sp.classes.iter().zip(&back.classes) {
                assert_eq!((&a.word, a.length, a.primitive, a.multiplicity), (&b.word, b.length, b.primitive, b.multiplicity));
                assert!(a.matrix.to_mat2().dist_psl(&b.matrix.to_mat2()) <= 1e-12 * a.matrix.abs_trace());
            }
            let mut again = Vec::new();
            write_ndjson(&back, &mut again).unwrap();
            assert_eq!(buf, again);
        }
    }

    #[test]
    fn tampered_records_are_rejected() {
        let sp = enumerate_spectrum(&bolza_group(), 3.1, &EnumOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&sp, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first_len = format!("{}", sp.classes[0].length);
        let bad = text.replacen(&first_len, "3.5", 1);
        assert!(read_ndjson(bad.as_bytes()).is_err());
        let truncated: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(read_ndjson(truncated.as_bytes()).is_err());
        assert!(read_ndjson("".as_bytes()).is_err());
    }

    #[test]
    fn csv_has_one_row_per_class() {
        let sp = enumerate_spectrum(&bolza_group(), 3.1, &EnumOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&sp, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), sp.classes.len() + 1);
        assert!(text.starts_with("index,word,length,trace,primitive,power_index,multiplicity"));
    }
}
