//! Named initial quivers: Dynkin diagrams, the rank-3 examples and the
//! exceptional mutation-finite quivers.
//!
//! `a<n>`, `b<n>`, `c<n>` and `d<n>` accept any admissible rank. `a3`, `b3`,
//! `c3` and `f4` use the orientations of the worked rank-3/rank-4 examples
//! (`1 -> 2 <- 3`, `1 -> 2 <- 3 -> 4`), whose base seeds carry the published
//! layer signatures.

use crate::matrix::ExchangeMatrix;

/// Names accepted by [`builtin`] (family names are listed with a sample rank).
pub const BUILTIN_NAMES: &[&str] = &[
    "a2", "a3", "a4", "b2", "b3", "c2", "c3", "d4", "d5", "f4", "g2", "e6", "e7", "e8", "markov",
    "atilde2", "atilde2-cyclic", "x6", "x7", "e66", "e77", "e88", "te6", "te7", "te8", "kronecker",
];

struct Builder {
    rows: Vec<Vec<i64>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder { rows: vec![vec![0; n]; n] }
    }

    /// Arrow `from -> to` (one-based) with value pair `(v1, v2)`.
    fn arrow(mut self, from: usize, to: usize, v1: i64, v2: i64) -> Self {
        self.rows[from - 1][to - 1] = v1;
        self.rows[to - 1][from - 1] = -v2;
        self
    }

    fn unit(self, from: usize, to: usize) -> Self {
        self.arrow(from, to, 1, 1)
    }

    fn double(self, from: usize, to: usize) -> Self {
        self.arrow(from, to, 2, 2)
    }

    fn path(mut self, vertices: &[usize]) -> Self {
        for w in vertices.windows(2) {
            self = self.unit(w[0], w[1]);
        }
        self
    }

    fn build(self) -> ExchangeMatrix {
        ExchangeMatrix::new(self.rows).expect("builtin quiver is skew-symmetrizable")
    }
}

fn linear(n: usize) -> Builder {
    let v: Vec<usize> = (1..=n).collect();
    Builder::new(n).path(&v)
}

/// `1 -> 2 -> ... -> n-1`, closed by `n -> n-1` carrying `(v1, v2)`.
fn bc(n: usize, v1: i64, v2: i64) -> Option<ExchangeMatrix> {
    if n < 2 {
        return None;
    }
    Some(linear(n - 1).grow(n).arrow(n, n - 1, v1, v2).build())
}

impl Builder {
    fn grow(self, n: usize) -> Self {
        let mut b = Builder::new(n);
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                b.rows[j][i] = v;
            }
        }
        b
    }
}

pub fn builtin(name: &str) -> Option<ExchangeMatrix> {
    let lower = name.to_ascii_lowercase();
    let fixed = match lower.as_str() {
        "a3" => Some(Builder::new(3).unit(1, 2).unit(3, 2).build()),
        "f4" => Some(Builder::new(4).unit(1, 2).arrow(3, 2, 2, 1).unit(3, 4).build()),
        "g2" => Some(Builder::new(2).arrow(1, 2, 3, 1).build()),
        "e6" => Some(linear(5).grow(6).unit(3, 6).build()),
        "e7" => Some(linear(6).grow(7).unit(3, 7).build()),
        "e8" => Some(linear(7).grow(8).unit(3, 8).build()),
        "markov" | "t3" => Some(Builder::new(3).double(1, 2).double(2, 3).double(3, 1).build()),
        "atilde2" => Some(Builder::new(3).unit(1, 2).unit(1, 3).unit(3, 2).build()),
        "atilde2-cyclic" => Some(Builder::new(3).double(1, 2).unit(2, 3).unit(3, 1).build()),
        "kronecker" => Some(Builder::new(2).double(1, 2).build()),
        "x6" => Some(
            Builder::new(6)
                .unit(3, 1)
                .double(1, 2)
                .unit(2, 3)
                .unit(3, 4)
                .double(4, 5)
                .unit(5, 3)
                .unit(6, 3)
                .build(),
        ),
        "x7" => Some(
            Builder::new(7)
                .unit(3, 1)
                .double(1, 2)
                .unit(2, 3)
                .unit(3, 4)
                .double(4, 5)
                .unit(5, 3)
                .unit(6, 3)
                .unit(3, 7)
                .double(7, 6)
                .build(),
        ),
        "te6" => Some(Builder::new(7).path(&[1, 2, 3, 4, 5]).unit(3, 6).unit(6, 7).build()),
        "te7" => Some(Builder::new(8).path(&[1, 2, 3, 4, 5, 6, 7]).unit(4, 8).build()),
        "te8" => Some(Builder::new(9).path(&[1, 2, 3, 4, 5, 6, 7, 8]).unit(3, 9).build()),
        "e66" => Some(
            Builder::new(8)
                .unit(1, 2)
                .unit(3, 4)
                .unit(5, 6)
                .double(8, 7)
                .unit(7, 2)
                .unit(2, 8)
                .unit(7, 3)
                .unit(3, 8)
                .unit(7, 5)
                .unit(5, 8)
                .build(),
        ),
        "e77" => Some(
            Builder::new(9)
                .path(&[1, 2, 3])
                .path(&[5, 6, 7])
                .double(9, 8)
                .unit(8, 3)
                .unit(3, 9)
                .unit(8, 4)
                .unit(4, 9)
                .unit(8, 5)
                .unit(5, 9)
                .build(),
        ),
        "e88" => Some(
            Builder::new(10)
                .unit(1, 2)
                .path(&[4, 5, 6, 7, 8])
                .double(10, 9)
                .unit(9, 2)
                .unit(2, 10)
                .unit(9, 3)
                .unit(3, 10)
                .unit(9, 4)
                .unit(4, 10)
                .build(),
        ),
        _ => None,
    };
    if fixed.is_some() {
        return fixed;
    }
    let (family, rank) = lower.split_at(1);
    let n: usize = rank.parse().ok()?;
    match family {
        "a" if n >= 1 => Some(linear(n).build()),
        "b" if n >= 2 => bc(n, 2, 1),
        "c" if n >= 2 => bc(n, 1, 2),
        "d" if n >= 4 => {
            let v: Vec<usize> = (1..=n - 2).collect();
            Some(Builder::new(n).path(&v).unit(n - 2, n - 1).unit(n - 2, n).build())
        }
        _ => None,
    }
}
