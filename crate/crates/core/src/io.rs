//! CSV readers and writers for graphs, points, signals, spectra and node
//! lists. Floats are written in shortest round-trip form so re-reading a file
//! reproduces the exact values.

use std::io::{Read, Write};

use crate::chebyshev::ChebyshevFilter;
use crate::error::{GspError, Result};
use crate::graph::Graph;
use crate::signal::GraphSignal;
use crate::spectral::SpectralBasis;

fn reader<R: Read>(input: R, expected: &[&str], prefix_only: bool) -> Result<csv::Reader<R>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let got: Vec<&str> = headers.iter().collect();
    let ok = if prefix_only {
        got.len() >= expected.len() && got[..expected.len()] == *expected
    } else {
        got == expected
    };
    if !ok {
        return Err(GspError::Parse(format!("expected header `{}`, got `{}`", expected.join(","), got.join(","))));
    }
    Ok(rdr)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    let raw = record.get(i).ok_or_else(|| GspError::Parse(format!("line {line}: missing column {}", i + 1)))?;
    raw.parse().map_err(|_| GspError::Parse(format!("line {line}: cannot parse `{raw}`")))
}

fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

/// Reads a `src,dst,weight` edge list. The node count is `nodes` when given,
/// otherwise one more than the largest index.
pub fn read_edge_list<R: Read>(input: R, directed: bool, nodes: Option<usize>) -> Result<Graph> {
    let mut rows = Vec::new();
    for record in reader(input, &["src", "dst", "weight"], false)?.records() {
        let record = record?;
        let line = line_of(&record);
        rows.push((field(&record, 0, line)?, field(&record, 1, line)?, field(&record, 2, line)?));
    }
    let n = nodes.unwrap_or_else(|| rows.iter().map(|&(s, d, _): &(usize, usize, f64)| s.max(d) + 1).max().unwrap_or(0));
    Graph::from_edge_list(&rows, n, directed)
}

/// Writes every stored edge record, sorted by `(src, dst)`.
pub fn write_edge_list<W: Write>(g: &Graph, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["src", "dst", "weight"])?;
    for e in g.edges() {
        w.write_record([e.src.to_string(), e.dst.to_string(), e.weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `id,x,y[,z...]`; ids must cover `0..n` exactly once.
pub fn read_points<R: Read>(input: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = reader(input, &["id", "x"], true)?;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        let id: usize = field(&record, 0, line)?;
        let coords = (1..record.len()).map(|i| field(&record, i, line)).collect::<Result<Vec<f64>>>()?;
        rows.push((id, coords));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(GspError::Parse("point ids must be 0..n without gaps or repeats".into()));
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}

/// Reads `node,value` pairs in file order.
pub fn read_samples<R: Read>(input: R) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for record in reader(input, &["node", "value"], false)?.records() {
        let record = record?;
        let line = line_of(&record);
        out.push((field(&record, 0, line)?, field(&record, 1, line)?));
    }
    Ok(out)
}

/// Reads a full `node,value` signal; every node in `0..n` must appear once.
pub fn read_signal<R: Read>(input: R, n: usize) -> Result<GraphSignal> {
    let mut values = vec![None; n];
    for (node, value) in read_samples(input)? {
        if node >= n {
            return Err(GspError::IndexOutOfRange { index: node, n });
        }
        if values[node].replace(value).is_some() {
            return Err(GspError::Parse(format!("node {node} listed twice")));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| GspError::Parse(format!("signal has no value for node {i}"))))
        .collect::<Result<Vec<f64>>>()?;
    GraphSignal::from_real(&values)
}

/// Writes the real part of each entry as `node,value`.
pub fn write_signal<W: Write>(s: &GraphSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node", "value"])?;
    for (i, v) in s.values().iter().enumerate() {
        w.write_record([i.to_string(), v.re.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `node` list.
pub fn read_nodes<R: Read>(input: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for record in reader(input, &["node"], false)?.records() {
        let record = record?;
        out.push(field(&record, 0, line_of(&record))?);
    }
    Ok(out)
}

/// Writes one node per line, under a `node` header when `header` is set.
pub fn write_nodes<W: Write>(nodes: &[usize], header: bool, mut out: W) -> Result<()> {
    if header {
        writeln!(out, "node")?;
    }
    for n in nodes {
        writeln!(out, "{n}")?;
    }
    out.flush()?;
    Ok(())
}

/// Spectrum rows in frequency order. `index` is the frequency rank; the
/// coefficient columns are empty when no spectrum is given.
pub fn write_spectrum<W: Write>(basis: &SpectralBasis, shat: Option<&GraphSignal>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "eigenvalue_re", "eigenvalue_im", "coefficient_re", "coefficient_im"])?;
    for (rank, &k) in basis.ordering().iter().enumerate() {
        let lambda = basis.eigenvalues()[k];
        let (cre, cim) = match shat {
            Some(s) => (s.values()[k].re.to_string(), s.values()[k].im.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([rank.to_string(), lambda.re.to_string(), lambda.im.to_string(), cre, cim])?;
    }
    w.flush()?;
    Ok(())
}

/// Chebyshev coefficients as `k,c_k`.
pub fn write_chebyshev<W: Write>(f: &ChebyshevFilter, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "c_k"])?;
    for (k, c) in f.coefficients().iter().enumerate() {
        w.write_record([k.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
