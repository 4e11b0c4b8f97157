use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use fermion_magic::gaussian::MajoranaString;
use fermion_magic::sampler::MajoranaSample;
use serde::{Deserialize, Serialize};

use crate::Common;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn sink(common: &Common) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &common.output {
        Some(path) => Box::new(io::BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_rows<T: Serialize>(rows: &[T], common: &Common) -> anyhow::Result<()> {
    let mut out = sink(common)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_text(text: &str, common: &Common) -> anyhow::Result<()> {
    let mut out = sink(common)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct SampleRow {
    x: String,
    log_prob: f64,
}

/// Reads `sample_index,x,log_prob` rows as written by the `sample` subcommand.
pub fn read_samples(path: &Path) -> anyhow::Result<Vec<MajoranaSample>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut samples = Vec::new();
    for row in reader.deserialize::<SampleRow>() {
        let row = row?;
        samples.push(MajoranaSample {
            x: row.x.parse::<MajoranaString>()?,
            log_prob: row.log_prob,
        });
    }
    Ok(samples)
}
