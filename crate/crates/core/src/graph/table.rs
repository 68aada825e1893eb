//! Constraint functions stored as satisfaction tables, and their trellis view.

use std::collections::HashSet;

use super::{Alphabet, Role};
use crate::error::{Error, Result};

/// The satisfaction set of a degree-3 constraint: every `(a, b, c)` row for
/// which the constraint holds.
///
/// A table built with [`SatisfactionTable::from_rows`] is only checked for
/// symbol ranges and duplicate rows; [`validate_table`] checks the
/// constraint-function property. [`SatisfactionTable::new`] does both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfactionTable {
    alphabets: [Alphabet; 3],
    rows: Vec<[usize; 3]>,
}

impl SatisfactionTable {
    /// Builds a table and checks that it defines a constraint function.
    pub fn new(alphabets: [Alphabet; 3], rows: Vec<[usize; 3]>) -> Result<Self> {
        let table = Self::from_rows(alphabets, rows)?;
        validate_table(&table)?;
        Ok(table)
    }

    /// Builds a table, checking symbol ranges and row uniqueness only.
    pub fn from_rows(alphabets: [Alphabet; 3], rows: Vec<[usize; 3]>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(rows.len());
        for row in &rows {
            for (symbol, alphabet) in row.iter().zip(alphabets.iter()) {
                alphabet.check(*symbol)?;
            }
            if !seen.insert(*row) {
                return Err(Error::DuplicateRow(row[0], row[1], row[2]));
            }
        }
        Ok(Self { alphabets, rows })
    }

    /// The binary-or-larger equality constraint `a = b = c` over `size` symbols.
    pub fn equality(size: usize) -> Result<Self> {
        let alphabet = Alphabet::new(size)?;
        Self::new([alphabet; 3], (0..size).map(|s| [s, s, s]).collect())
    }

    /// The binary parity constraint `a ^ b ^ c = 0`.
    pub fn parity() -> Self {
        let bit = Alphabet::BINARY;
        let rows = (0..2)
            .flat_map(|a| (0..2).map(move |b| [a, b, a ^ b]))
            .collect();
        Self::new([bit; 3], rows).expect("parity table is a constraint function")
    }

    pub fn alphabets(&self) -> [Alphabet; 3] {
        self.alphabets
    }

    pub fn alphabet(&self, role: Role) -> Alphabet {
        self.alphabets[role.index()]
    }

    pub fn rows(&self) -> &[[usize; 3]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `S_{role=symbol}`: the pairs of the two other roles (in A, B, C order)
    /// that appear together with `symbol` in some row.
    pub fn project(&self, role: Role, symbol: usize) -> Vec<(usize, usize)> {
        let (x, y) = role.others();
        self.rows
            .iter()
            .filter(|row| row[role.index()] == symbol)
            .map(|row| (row[x.index()], row[y.index()]))
            .collect()
    }

    /// Evaluates the induced mapping `f_role` on the two other roles' symbols.
    pub fn image(&self, role: Role, x: usize, y: usize) -> Option<usize> {
        let (rx, ry) = role.others();
        self.rows
            .iter()
            .find(|row| row[rx.index()] == x && row[ry.index()] == y)
            .map(|row| row[role.index()])
    }

    /// Dense lookup table for `f_role`, indexed by `x * |y| + y`.
    pub fn image_table(&self, role: Role) -> Vec<Option<usize>> {
        let (rx, ry) = role.others();
        let width = self.alphabet(ry).size();
        let mut out = vec![None; self.alphabet(rx).size() * width];
        for row in &self.rows {
            out[row[rx.index()] * width + row[ry.index()]] = Some(row[role.index()]);
        }
        out
    }

    pub fn to_trellis(&self) -> TrellisSection {
        TrellisSection {
            left_states: self.alphabets[0],
            labels: self.alphabets[1],
            right_states: self.alphabets[2],
            branches: self
                .rows
                .iter()
                .map(|&[left, label, right]| Branch { left, label, right })
                .collect(),
        }
    }

    pub fn from_trellis(trellis: &TrellisSection) -> Result<Self> {
        Self::new(
            [trellis.left_states, trellis.labels, trellis.right_states],
            trellis
                .branches
                .iter()
                .map(|b| [b.left, b.label, b.right])
                .collect(),
        )
    }
}

/// Checks that each of `f_A`, `f_B`, `f_C` is single-valued.
///
/// Roles are checked in A, B, C order; the error names the first violated
/// mapping together with the argument pair that has two images.
pub fn validate_table(table: &SatisfactionTable) -> Result<()> {
    for role in Role::ALL {
        let (x, y) = role.others();
        let mut images = std::collections::HashMap::new();
        for row in &table.rows {
            let key = (row[x.index()], row[y.index()]);
            let value = row[role.index()];
            if let Some(prev) = images.insert(key, value) {
                if prev != value {
                    return Err(Error::NotAFunction { role, witness: key });
                }
            }
        }
    }
    Ok(())
}

/// One branch of a trellis section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Branch {
    pub left: usize,
    pub label: usize,
    pub right: usize,
}

/// Two columns of states joined by labelled branches; one branch per
/// satisfaction-table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrellisSection {
    pub left_states: Alphabet,
    pub labels: Alphabet,
    pub right_states: Alphabet,
    pub branches: Vec<Branch>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_table() -> SatisfactionTable {
        let four = Alphabet::new(4).unwrap();
        SatisfactionTable::new(
            [four; 3],
            vec![
                [0, 0, 0],
                [0, 1, 1],
                [1, 3, 2],
                [1, 2, 3],
                [2, 2, 0],
                [2, 3, 1],
                [3, 1, 2],
                [3, 0, 3],
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_table_is_a_constraint_function() {
        assert!(validate_table(&example_table()).is_ok());
    }

    #[test]
    fn single_row_is_valid() {
        let bit = Alphabet::BINARY;
        assert!(SatisfactionTable::new([bit; 3], vec![[0, 0, 0]]).is_ok());
    }

    #[test]
    fn two_images_for_one_pair_is_rejected() {
        let bit = Alphabet::BINARY;
        let t = SatisfactionTable::from_rows([bit; 3], vec![[0, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(
            validate_table(&t),
            Err(Error::NotAFunction {
                role: Role::C,
                witness: (0, 0)
            })
        );
    }

    #[test]
    fn out_of_range_and_duplicates() {
        let bit = Alphabet::BINARY;
        assert!(matches!(
            SatisfactionTable::from_rows([bit; 3], vec![[0, 2, 0]]),
            Err(Error::SymbolOutOfRange { symbol: 2, size: 2 })
        ));
        assert_eq!(
            SatisfactionTable::from_rows([bit; 3], vec![[1, 1, 0], [1, 1, 0]]),
            Err(Error::DuplicateRow(1, 1, 0))
        );
    }

    #[test]
    fn projections_of_example_table() {
        let t = example_table();
        let mut c0 = t.project(Role::C, 0);
        c0.sort();
        assert_eq!(c0, vec![(0, 0), (2, 2)]);
        let mut c2 = t.project(Role::C, 2);
        c2.sort();
        assert_eq!(c2, vec![(1, 3), (3, 1)]);
        let bit = Alphabet::BINARY;
        let single = SatisfactionTable::new([bit; 3], vec![[0, 0, 0]]).unwrap();
        assert!(single.project(Role::A, 1).is_empty());
    }

    #[test]
    fn image_follows_rows() {
        let t = example_table();
        assert_eq!(t.image(Role::C, 1, 3), Some(2));
        assert_eq!(t.image(Role::C, 0, 3), None);
        assert_eq!(t.image(Role::A, 3, 2), Some(1));
        assert_eq!(t.image(Role::B, 2, 1), Some(3));
        let lut = t.image_table(Role::C);
        assert_eq!(lut[4 + 3], Some(2));
        assert_eq!(lut[3], None);
    }

    #[test]
    fn trellis_views() {
        let t = example_table();
        let tr = t.to_trellis();
        assert_eq!(tr.branches.len(), 8);
        assert_eq!(tr.left_states.size(), 4);
        assert_eq!(tr.right_states.size(), 4);
        assert_eq!(SatisfactionTable::from_trellis(&tr).unwrap(), t);

        let bit = Alphabet::BINARY;
        let single = SatisfactionTable::new([bit; 3], vec![[1, 0, 1]]).unwrap();
        assert_eq!(single.to_trellis().branches.len(), 1);

        let eq = SatisfactionTable::equality(2).unwrap();
        let tr = eq.to_trellis();
        assert_eq!(
            tr.branches,
            vec![
                Branch {
                    left: 0,
                    label: 0,
                    right: 0
                },
                Branch {
                    left: 1,
                    label: 1,
                    right: 1
                }
            ]
        );
    }

    #[test]
    fn parity_rows() {
        let p = SatisfactionTable::parity();
        assert_eq!(p.len(), 4);
        assert!(p.rows().iter().all(|r| r[0] ^ r[1] ^ r[2] == 0));
    }
}
