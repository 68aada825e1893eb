//! The (256, 121) product of the (16, 11) extended Hamming code with itself.

use std::sync::Arc;

use super::hamming::{add_trellis_chain, hamming_sections};
use super::LinearCode;
use crate::error::{Error, Result};
use crate::graph::{
    Alphabet, ConstraintGraph, GraphBuilder, Role, SatisfactionTable, SlotRef, VariableRole,
};

pub const SIDE: usize = 16;
pub const INFO_SIDE: usize = 11;

/// Where each grid cell lives in the product graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCodeLayout {
    pub rows: usize,
    pub cols: usize,
    /// Observable variable of cell `(r, c)` at `bit_grid[r][c]`.
    pub bit_grid: Vec<Vec<usize>>,
    /// Equality supernode of cell `(r, c)`.
    pub equality: Vec<Vec<usize>>,
    /// Trellis section ids of each row decoder, then each column decoder.
    pub row_sections: Vec<Vec<usize>>,
    pub col_sections: Vec<Vec<usize>>,
}

/// Builds the product-code graph.
///
/// Sixteen row copies and sixteen column copies of the Hamming trellis chain
/// meet at one binary equality supernode per cell. The supernode's slot A
/// faces the row decoder, slot B the cell's observable variable, slot C the
/// column decoder. Observable variables are declared in row-major order.
pub fn build_product_graph() -> (ConstraintGraph, ProductCodeLayout) {
    let sections = hamming_sections();
    let eq = Arc::new(SatisfactionTable::equality(2).expect("binary equality"));
    let mut g = GraphBuilder::new();

    let bit_grid: Vec<Vec<usize>> = (0..SIDE)
        .map(|r| {
            (0..SIDE)
                .map(|c| {
                    let role = if r < INFO_SIDE && c < INFO_SIDE {
                        VariableRole::Info
                    } else {
                        VariableRole::Parity
                    };
                    g.variable(format!("x{r}_{c}"), Alphabet::BINARY, role)
                })
                .collect()
        })
        .collect();
    let equality: Vec<Vec<usize>> = (0..SIDE)
        .map(|r| {
            (0..SIDE)
                .map(|c| g.supernode(format!("eq{r}_{c}"), eq.clone()))
                .collect()
        })
        .collect();
    for r in 0..SIDE {
        for c in 0..SIDE {
            g.observe(bit_grid[r][c], SlotRef::new(equality[r][c], Role::B));
        }
    }

    let mut row_sections = Vec::new();
    for (r, eq_row) in equality.iter().enumerate() {
        let ids = add_trellis_chain(&mut g, &format!("row{r}"), &sections);
        for (c, (&t, &eq)) in ids.iter().zip(eq_row).enumerate() {
            let v = g.variable(
                format!("row{r}b{c}"),
                Alphabet::BINARY,
                VariableRole::Internal,
            );
            g.join(v, SlotRef::new(t, Role::B), SlotRef::new(eq, Role::A));
        }
        row_sections.push(ids);
    }
    let mut col_sections = Vec::new();
    for c in 0..SIDE {
        let ids = add_trellis_chain(&mut g, &format!("col{c}"), &sections);
        for (r, (&t, eq_row)) in ids.iter().zip(&equality).enumerate() {
            let v = g.variable(
                format!("col{c}b{r}"),
                Alphabet::BINARY,
                VariableRole::Internal,
            );
            g.join(
                v,
                SlotRef::new(t, Role::B),
                SlotRef::new(eq_row[c], Role::C),
            );
        }
        col_sections.push(ids);
    }

    let graph = g.build().expect("product graph is well formed");
    let layout = ProductCodeLayout {
        rows: SIDE,
        cols: SIDE,
        bit_grid,
        equality,
        row_sections,
        col_sections,
    };
    (graph, layout)
}

/// Encodes 121 info bits (row-major 11×11) into a row-major 16×16 codeword:
/// rows first, then every column including the checks-on-checks block.
pub fn encode_product(code: &LinearCode, info: &[u8]) -> Result<Vec<u8>> {
    if info.len() != INFO_SIDE * INFO_SIDE {
        return Err(Error::LengthMismatch {
            expected: INFO_SIDE * INFO_SIDE,
            got: info.len(),
        });
    }
    let mut grid = vec![0u8; SIDE * SIDE];
    for r in 0..INFO_SIDE {
        let row = code.encode(&info[r * INFO_SIDE..(r + 1) * INFO_SIDE])?;
        grid[r * SIDE..(r + 1) * SIDE].copy_from_slice(&row);
    }
    for c in 0..SIDE {
        let column: Vec<u8> = (0..INFO_SIDE).map(|r| grid[r * SIDE + c]).collect();
        let coded = code.encode(&column)?;
        for r in INFO_SIDE..SIDE {
            grid[r * SIDE + c] = coded[r];
        }
    }
    Ok(grid)
}

/// Codeword positions (row-major) of the info bits.
pub fn product_info_positions() -> Vec<usize> {
    (0..INFO_SIDE)
        .flat_map(|r| (0..INFO_SIDE).map(move |c| r * SIDE + c))
        .collect()
}
