//! On-disk formats.
//!
//! Datasets are JSON lines: a header object followed by one record per
//! series. Numbers are written in the shortest form that parses back to the
//! same `f64`, so `read(write(d)) == d` bit for bit.
//!
//! ```text
//! {"format_version":1,"generator":"ram","params":{...},"seed":7,"dimensionality":3,"rng":"chacha8"}
//! {"label":"class_000","index":0,"series":[[x,y,z],...]}
//! ```
//!
//! Score tables are CSV with a `#` preamble carrying provenance, one column
//! per axis, one per replicate and a trailing `mean` column. Rows are in
//! lexicographic order of the axis indices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{mean, ScoreTable};
use crate::distance::DistanceKind;
use crate::error::{Error, Result};
use crate::series::{DatasetMeta, LabeledDataset, LabeledSeries, TimeSeries};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u64,
    generator: String,
    params: BTreeMap<String, f64>,
    seed: u64,
    dimensionality: usize,
    rng: String,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    label: &'a str,
    index: usize,
    series: Vec<&'a [f64]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    label: String,
    index: usize,
    series: Vec<Vec<f64>>,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(e.into())
}

pub fn write_dataset<W: Write>(dataset: &LabeledDataset, mut out: W) -> Result<()> {
    let meta = dataset.meta();
    let header = Header {
        format_version: FORMAT_VERSION,
        generator: meta.generator.clone(),
        params: meta.params.clone(),
        seed: meta.seed,
        dimensionality: dataset.dim(),
        rng: meta.rng.clone(),
    };
    serde_json::to_writer(&mut out, &header).map_err(json_err)?;
    out.write_all(b"\n")?;
    for (index, item) in dataset.items().iter().enumerate() {
        let rec = RecordOut {
            label: item.label(),
            index,
            series: item.series().points().collect(),
        };
        serde_json::to_writer(&mut out, &rec).map_err(json_err)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_dataset<R: BufRead>(input: R) -> Result<LabeledDataset> {
    let mut lines = input.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let first = first?;
    let raw: serde_json::Value =
        serde_json::from_str(&first).map_err(|e| Error::parse(1, format!("header: {e}")))?;
    let version = raw
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::parse(1, "header lacks an integer format_version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let header: Header = serde_json::from_value(raw).map_err(|e| Error::parse(1, format!("header: {e}")))?;
    if header.dimensionality == 0 {
        return Err(Error::parse(1, "dimensionality must be at least 1"));
    }

    let mut items = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line?;
        let rec: RecordIn = serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if rec.index != items.len() {
            return Err(Error::parse(
                lineno,
                format!(
                    "record index {} out of order (expected {})",
                    rec.index,
                    items.len()
                ),
            ));
        }
        if let Some(row) = rec.series.iter().find(|r| r.len() != header.dimensionality) {
            return Err(Error::parse(
                lineno,
                format!(
                    "point of dimensionality {} in a dataset of dimensionality {}",
                    row.len(),
                    header.dimensionality
                ),
            ));
        }
        let series = TimeSeries::from_rows(&rec.series).map_err(|e| Error::parse(lineno, e.to_string()))?;
        items.push(LabeledSeries::new(rec.label, series).map_err(|e| Error::parse(lineno, e.to_string()))?);
    }
    if items.is_empty() {
        return Err(Error::parse(1, "dataset has no records"));
    }
    let meta = DatasetMeta {
        generator: header.generator,
        params: header.params,
        seed: header.seed,
        rng: header.rng,
    };
    LabeledDataset::new(items, meta)
}

pub fn write_dataset_file(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    write_dataset(dataset, BufWriter::new(File::create(path)?))
}

pub fn read_dataset_file(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    read_dataset(BufReader::new(File::open(path)?))
}

pub fn format_scores(table: &ScoreTable) -> Result<String> {
    table.validate()?;
    let mut s = String::new();
    let _ = writeln!(s, "# format_version: {FORMAT_VERSION}");
    let _ = writeln!(s, "# generator: {}", table.generator);
    let _ = writeln!(s, "# distance: {}", table.distance);
    let _ = writeln!(s, "# master_seed: {}", table.master_seed);
    let _ = writeln!(s, "# replicates: {}", table.replicates);
    for (name, values) in table.axis_names.iter().zip(&table.axis_values) {
        let _ = writeln!(s, "# axis.{name}: {}", join(values));
    }
    for (name, value) in &table.fixed_params {
        let _ = writeln!(s, "# fixed.{name}: {value}");
    }
    let mut header: Vec<String> = table.axis_names.clone();
    header.extend((1..=table.replicates).map(|r| format!("rep_{r}")));
    header.push("mean".to_string());
    let _ = writeln!(s, "{}", header.join(","));

    for (cell, reps) in table.replicate_scores.iter().enumerate() {
        let mut fields = Vec::new();
        let mut rest = cell;
        let mut coords = vec![0; table.axis_values.len()];
        for (k, values) in table.axis_values.iter().enumerate().rev() {
            coords[k] = rest % values.len();
            rest /= values.len();
        }
        for (values, idx) in table.axis_values.iter().zip(coords) {
            fields.push(values[idx].to_string());
        }
        fields.extend(reps.iter().map(f64::to_string));
        fields.push(mean(reps).to_string());
        let _ = writeln!(s, "{}", fields.join(","));
    }
    Ok(s)
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub fn write_scores<W: Write>(table: &ScoreTable, mut out: W) -> Result<()> {
    out.write_all(format_scores(table)?.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn write_scores_file(table: &ScoreTable, path: impl AsRef<Path>) -> Result<()> {
    write_scores(table, BufWriter::new(File::create(path)?))
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number {s:?}")));
    }
    Ok(v)
}

pub fn read_scores<R: BufRead>(input: R) -> Result<ScoreTable> {
    let mut preamble: Vec<(usize, String, String)> = Vec::new();
    let mut body: Vec<(usize, String)> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("# ") {
            if !body.is_empty() {
                return Err(Error::parse(lineno, "comment after the column header"));
            }
            let (k, v) = rest
                .split_once(": ")
                .ok_or_else(|| Error::parse(lineno, "expected `# key: value`"))?;
            preamble.push((lineno, k.to_string(), v.to_string()));
        } else {
            body.push((lineno, line));
        }
    }

    let mut version = None;
    let mut generator = None;
    let mut distance = None;
    let mut master_seed = None;
    let mut replicates = None;
    let mut axis_names = Vec::new();
    let mut axis_values = Vec::new();
    let mut fixed_params = BTreeMap::new();
    for (lineno, key, value) in &preamble {
        let lineno = *lineno;
        let int = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("bad integer {v:?}")))
        };
        match key.as_str() {
            "format_version" => version = Some(int(value)?),
            "generator" => generator = Some(value.clone()),
            "distance" => {
                distance = Some(
                    value
                        .parse::<DistanceKind>()
                        .map_err(|e| Error::parse(lineno, e.to_string()))?,
                )
            }
            "master_seed" => master_seed = Some(int(value)?),
            "replicates" => replicates = Some(int(value)? as usize),
            k => {
                if let Some(name) = k.strip_prefix("axis.") {
                    axis_names.push(name.to_string());
                    axis_values.push(
                        value
                            .split(',')
                            .map(|v| parse_f64(lineno, v))
                            .collect::<Result<Vec<_>>>()?,
                    );
                } else if let Some(name) = k.strip_prefix("fixed.") {
                    fixed_params.insert(name.to_string(), parse_f64(lineno, value)?);
                } else {
                    return Err(Error::parse(lineno, format!("unknown preamble key {k:?}")));
                }
            }
        }
    }
    let missing = |what: &str| Error::parse(1, format!("preamble lacks {what}"));
    let version = version.ok_or_else(|| missing("format_version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let replicates = replicates.ok_or_else(|| missing("replicates"))?;
    let mut table = ScoreTable {
        axis_names,
        axis_values,
        replicate_scores: Vec::new(),
        replicates,
        master_seed: master_seed.ok_or_else(|| missing("master_seed"))?,
        generator: generator.ok_or_else(|| missing("generator"))?,
        distance: distance.ok_or_else(|| missing("distance"))?,
        fixed_params,
    };

    let mut rows = body.into_iter();
    let (hline, header) = rows.next().ok_or_else(|| missing("a column header"))?;
    let mut expected: Vec<String> = table.axis_names.clone();
    expected.extend((1..=replicates).map(|r| format!("rep_{r}")));
    expected.push("mean".to_string());
    if header != expected.join(",") {
        return Err(Error::parse(
            hline,
            format!("expected columns {}", expected.join(",")),
        ));
    }

    let n_axes = table.axis_names.len();
    for (lineno, row) in rows {
        let fields = row
            .split(',')
            .map(|f| parse_f64(lineno, f))
            .collect::<Result<Vec<_>>>()?;
        if fields.len() != expected.len() {
            return Err(Error::parse(
                lineno,
                format!("{} fields, expected {}", fields.len(), expected.len()),
            ));
        }
        let reps = fields[n_axes..n_axes + replicates].to_vec();
        if fields[n_axes + replicates].to_bits() != mean(&reps).to_bits() {
            return Err(Error::parse(
                lineno,
                "mean column disagrees with replicate scores",
            ));
        }
        // axis columns must match the declared grid order
        let cell = table.replicate_scores.len();
        let mut rest = cell;
        for k in (0..n_axes).rev() {
            let values = &table.axis_values[k];
            let idx = rest % values.len();
            rest /= values.len();
            if values[idx].to_bits() != fields[k].to_bits() {
                return Err(Error::parse(
                    lineno,
                    format!("row out of grid order at axis {}", table.axis_names[k]),
                ));
            }
        }
        if rest != 0 {
            return Err(Error::parse(lineno, "more rows than grid cells"));
        }
        table.replicate_scores.push(reps);
    }
    table.validate().map_err(|e| Error::parse(1, e.to_string()))?;
    Ok(table)
}

pub fn read_scores_file(path: impl AsRef<Path>) -> Result<ScoreTable> {
    read_scores(BufReader::new(File::open(path)?))
}

/// Colour of a score: linear ramp from light grey (0) to dark blue (1).
pub fn ramp_color(score: f64) -> (u8, u8, u8) {
    const LOW: [f64; 3] = [240.0, 240.0, 240.0];
    const HIGH: [f64; 3] = [8.0, 81.0, 156.0];
    let t = score.clamp(0.0, 1.0);
    let c = |k: usize| (LOW[k] + t * (HIGH[k] - LOW[k])).round() as u8;
    (c(0), c(1), c(2))
}

const CELL_W: usize = 64;
const CELL_H: usize = 40;
const LEFT: usize = 100;
const TOP: usize = 50;
const BOTTOM: usize = 60;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a two-axis table as SVG: first axis on rows, second on columns,
/// one `<rect class="cell">` per cell.
pub fn render_heatmap(table: &ScoreTable) -> Result<String> {
    if table.axis_names.len() != 2 {
        return Err(Error::invalid(format!(
            "heatmap needs exactly 2 axes, table has {}",
            table.axis_names.len()
        )));
    }
    table.validate()?;
    let rows = &table.axis_values[0];
    let cols = &table.axis_values[1];
    let width = LEFT + cols.len() * CELL_W + 20;
    let height = TOP + rows.len() * CELL_H + BOTTOM;
    let means = table.means();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2,
        escape(&format!(
            "1-NN score: {} / {} (seed {}, {} replicates)",
            table.generator, table.distance, table.master_seed, table.replicates
        ))
    );
    for (r, rv) in rows.iter().enumerate() {
        for (c, cv) in cols.iter().enumerate() {
            let score = means[r * cols.len() + c];
            let (red, green, blue) = ramp_color(score);
            let x = LEFT + c * CELL_W;
            let y = TOP + r * CELL_H;
            let _ = writeln!(
                s,
                r##"<rect class="cell" x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="#{red:02x}{green:02x}{blue:02x}"><title>{}={rv}, {}={cv}: {score}</title></rect>"##,
                escape(&table.axis_names[0]),
                escape(&table.axis_names[1]),
            );
            let ink = if score > 0.5 { "#ffffff" } else { "#000000" };
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle" fill="{ink}">{score:.3}</text>"#,
                x + CELL_W / 2,
                y + CELL_H / 2 + 4
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{rv}</text>"#,
            LEFT - 6,
            TOP + r * CELL_H + CELL_H / 2 + 4
        );
    }
    let base = TOP + rows.len() * CELL_H;
    for (c, cv) in cols.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{cv}</text>"#,
            LEFT + c * CELL_W + CELL_W / 2,
            base + 16
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + cols.len() * CELL_W / 2,
        base + 40,
        escape(&table.axis_names[1])
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + rows.len() * CELL_H / 2,
        TOP + rows.len() * CELL_H / 2,
        escape(&table.axis_names[0])
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn export_heatmap<W: Write>(table: &ScoreTable, mut out: W) -> Result<()> {
    out.write_all(render_heatmap(table)?.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn export_heatmap_file(table: &ScoreTable, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_heatmap(table)?;
    std::fs::write(path, svg)?;
    Ok(())
}
