//! Known closed forms for `gamma(G_{n,m})`.

use crate::grid::GridDims;

/// `floor((n+2)(m+2)/5) - 4`.
pub fn chang_formula(dims: GridDims) -> i64 {
    let (n, m) = (dims.n as i64, dims.m as i64);
    ((n + 2) * (m + 2)).div_euclid(5) - 4
}

/// When a row's correction applies.
#[derive(Clone, Copy, Debug)]
enum When {
    /// `m` is one of these values.
    In(&'static [u32]),
    /// `m mod modulus` is one of these residues.
    Mod(u32, &'static [u32]),
}

/// `ceil((a*m + b) / d) + adjust` if any condition in `when` holds, else
/// without `adjust`.
#[derive(Clone, Copy, Debug)]
struct Row {
    n: u32,
    a: i64,
    b: i64,
    d: i64,
    adjust: i64,
    when: &'static [When],
}

const fn row(n: u32, a: i64, b: i64, d: i64) -> Row {
    Row {
        n,
        a,
        b,
        d,
        adjust: 0,
        when: &[],
    }
}

const fn except(n: u32, a: i64, b: i64, d: i64, adjust: i64, when: &'static [When]) -> Row {
    Row {
        n,
        a,
        b,
        d,
        adjust,
        when,
    }
}

/// Rows for `n <= 15` (with `n <= m`). Wider grids follow
/// [`chang_formula`].
const TABLE: [Row; 15] = [
    row(1, 1, 0, 3),
    row(2, 1, 1, 2),
    row(3, 3, 1, 4),
    except(4, 1, 0, 1, 1, &[When::In(&[5, 6, 9])]),
    except(5, 6, 4, 5, -1, &[When::In(&[7])]),
    row(6, 10, 4, 7),
    row(7, 5, 1, 3),
    row(8, 15, 7, 8),
    row(9, 23, 10, 11),
    except(
        10,
        30,
        15,
        13,
        -1,
        &[When::Mod(13, &[10]), When::In(&[13, 16])],
    ),
    except(11, 38, 22, 15, -1, &[When::In(&[11, 18, 20, 22, 33])]),
    row(12, 80, 38, 29),
    except(13, 98, 54, 33, -1, &[When::Mod(33, &[13, 16, 18, 19])]),
    except(14, 35, 20, 11, -1, &[When::Mod(22, &[7])]),
    except(15, 44, 28, 13, -1, &[When::Mod(26, &[5])]),
];

fn ceil_div(a: i64, d: i64) -> i64 {
    (a + d - 1).div_euclid(d)
}

impl When {
    fn holds(self, m: u32) -> bool {
        match self {
            When::In(values) => values.contains(&m),
            When::Mod(modulus, residues) => residues.contains(&(m % modulus)),
        }
    }
}

/// Where a closed-form value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormSource {
    /// The per-row table for the narrow side at most 15.
    Table,
    /// `floor((n+2)(m+2)/5) - 4` for the narrow side at least 16.
    Chang,
}

/// `gamma(G_{n,m})` from the closed forms, with its source. Every grid is
/// covered: narrow sides up to 15 by the table, the rest by the formula.
pub fn gamma_closed_form_with_source(dims: GridDims) -> Option<(u32, ClosedFormSource)> {
    let GridDims { n, m } = dims.normalized();
    if n >= 16 {
        return Some((chang_formula(dims) as u32, ClosedFormSource::Chang));
    }
    let r = TABLE.iter().find(|r| r.n == n)?;
    let base = ceil_div(r.a * m as i64 + r.b, r.d);
    let adjust = if r.when.iter().any(|w| w.holds(m)) {
        r.adjust
    } else {
        0
    };
    Some(((base + adjust) as u32, ClosedFormSource::Table))
}

pub fn gamma_closed_form(dims: GridDims) -> Option<u32> {
    gamma_closed_form_with_source(dims).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, m: u32) -> u32 {
        gamma_closed_form(GridDims::new(n, m).unwrap()).unwrap()
    }

    #[test]
    fn documented_values() {
        assert_eq!(g(4, 9), 10);
        assert_eq!(g(11, 18), 47);
        assert_eq!(g(2, 2), 2);
        assert_eq!(g(4, 5), 6);
        assert_eq!(g(5, 7), 9);
        assert_eq!(g(3, 3), 3);
        assert_eq!(g(1, 3), 1);
        assert_eq!(g(24, 24), 131);
        assert_eq!(g(9, 4), g(4, 9));
    }

    #[test]
    fn chang_examples() {
        let c = |n, m| chang_formula(GridDims::new(n, m).unwrap());
        assert_eq!(c(24, 24), 131);
        assert_eq!(c(16, 16), 60);
        assert_eq!(c(1, 1), -3);
    }

    #[test]
    fn exceptions_only_lower_by_one() {
        assert_eq!(g(10, 10), 24);
        assert_eq!(g(10, 23), g(10, 23));
        assert_eq!(g(10, 13) + 1, ceil_div(30 * 13 + 15, 13) as u32);
        assert_eq!(g(13, 46) + 1, ceil_div(98 * 46 + 54, 33) as u32);
        assert_eq!(g(14, 29) + 1, ceil_div(35 * 29 + 20, 11) as u32);
        assert_eq!(g(15, 31) + 1, ceil_div(44 * 31 + 28, 13) as u32);
    }
}
