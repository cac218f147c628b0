//! Edge-list text format.
//!
//! ```text
//! N K rho
//! k(0)
//! ...
//! k(N-1)
//! i j        (one line per edge, 0-indexed, i < j)
//! ```

use std::io::{BufRead, Write};

use super::{Graph, SbmParams};
use crate::error::{invalid, Error, Result};
use crate::io::fmt_real;

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeListFile {
    pub n: usize,
    pub k: usize,
    pub rho: f64,
    pub blocks: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl EdgeListFile {
    pub fn from_graph(graph: &Graph) -> Self {
        EdgeListFile {
            n: graph.n(),
            k: graph.num_blocks(),
            rho: graph.rho(),
            blocks: (0..graph.n()).map(|i| graph.block_of(i) as u32).collect(),
            edges: graph.edges().collect(),
        }
    }

    /// Block sizes implied by the block column.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &b in &self.blocks {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Rebuilds the graph. `params` supplies the weights and must agree with
    /// the stored vertex count, density and block layout.
    pub fn into_graph(self, params: SbmParams, seed: Option<u64>) -> Result<Graph> {
        if params.n != self.n || params.num_blocks() != self.k {
            return Err(invalid(format!(
                "edge list has N={} K={}, parameters have N={} K={}",
                self.n,
                self.k,
                params.n,
                params.num_blocks()
            )));
        }
        if params.rho.to_bits() != self.rho.to_bits() {
            return Err(invalid(format!("edge list has rho={}, parameters have rho={}", self.rho, params.rho)));
        }
        let model = params.block_model()?;
        for (i, &b) in self.blocks.iter().enumerate() {
            if model.block_of(i) != b as usize {
                return Err(invalid(format!(
                    "vertex {i} is in block {b} but the parameters place it in block {}",
                    model.block_of(i)
                )));
            }
        }
        Graph::from_model_edges(params, model, &self.edges, seed)
    }
}

pub fn write_edge_list<W: Write>(mut w: W, graph: &Graph) -> Result<()> {
    writeln!(w, "{} {} {}", graph.n(), graph.num_blocks(), fmt_real(graph.rho()))?;
    for i in 0..graph.n() {
        writeln!(w, "{}", graph.block_of(i))?;
    }
    for (i, j) in graph.edges() {
        writeln!(w, "{i} {j}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<EdgeListFile> {
    let mut lines = r.lines().enumerate().filter_map(|(no, line)| match line {
        Ok(l) if l.trim().is_empty() => None,
        other => Some((no + 1, other)),
    });
    let parse_err = |no: usize, msg: &str| Error::Parse(format!("line {no}: {msg}"));
    let (no, header) = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(no, "header must be `N K rho`"));
    }
    let n: usize = fields[0].parse().map_err(|_| parse_err(no, "bad N"))?;
    let k: usize = fields[1].parse().map_err(|_| parse_err(no, "bad K"))?;
    let rho: f64 = fields[2].parse().map_err(|_| parse_err(no, "bad rho"))?;
    let mut blocks = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse("missing block lines".into()))?;
        let b: u32 = line?.trim().parse().map_err(|_| parse_err(no, "bad block index"))?;
        if b as usize >= k {
            return Err(parse_err(no, "block index out of range"));
        }
        blocks.push(b);
    }
    let mut edges = Vec::new();
    for (no, line) in lines {
        let line = line?;
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(no, "edge line must be `i j`"));
        };
        let i: u32 = a.parse().map_err(|_| parse_err(no, "bad vertex index"))?;
        let j: u32 = b.parse().map_err(|_| parse_err(no, "bad vertex index"))?;
        if i >= j || j as usize >= n {
            return Err(parse_err(no, "edge must satisfy i < j < N"));
        }
        edges.push((i, j));
    }
    Ok(EdgeListFile { n, k, rho, blocks, edges })
}
