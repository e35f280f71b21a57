//! Digit-for-digit check of the published 264-bit worked example.

use std::fmt;

use num_bigint::BigUint;

use crate::context::{BoundMode, FermatContext};
use crate::numeric::Natural;
use crate::region::effectiveness_report;

pub const EXAMPLE_N: &str =
    "24758167959654528007156374531915464081839760935532218683689708649238085888673119";
pub const EXAMPLE_P: &str = "6847944682037444681162770672798288913849";
pub const EXAMPLE_Q: &str = "3615415881585117908550243505309785526231";

/// The eight published values, in print order.
pub const EXPECTED: [(&str, &str); 8] = [
    ("X0", "4975758028647949436694003969298664117473"),
    ("P0", "3171681298218633703780106501840055232610"),
    ("c", "255922253163331858162503119755373102567"),
    ("alpha", "1360342147062831528143760463988878591242"),
    ("0.255X0", "1268818297305227106356971012171159349956"),
    ("z", "91523849757604421786789451817719241286"),
    ("0.4z", "36609539903041768714715780727087696514"),
    ("c - 0.4z", "219312713260290089447787339028285406053"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed() {
                writeln!(f, "ok       {:<9} {}", c.name, c.actual)?;
            } else {
                writeln!(f, "MISMATCH {:<9} expected {} actual {}", c.name, c.expected, c.actual)?;
            }
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict}: {}/{} values match", self.checks.iter().filter(|c| c.passed()).count(), self.checks.len())
    }
}

/// Recomputes the worked example from `n`, `p`, `q` alone.
pub fn verify_example() -> VerifyReport {
    let n: Natural = EXAMPLE_N.parse().expect("constant");
    let p: BigUint = EXAMPLE_P.parse().expect("constant");
    let q: BigUint = EXAMPLE_Q.parse().expect("constant");
    let ctx = FermatContext::new(n).expect("odd modulus");
    let actual: Vec<String> = match effectiveness_report(&ctx, &p, &q, BoundMode::Paper) {
        Ok(r) => vec![
            ctx.x0().to_string(),
            ctx.p0().to_string(),
            r.true_c.to_string(),
            r.true_alpha.to_string(),
            r.boundary_paper.to_string(),
            r.z.to_string(),
            r.sieved_iterations.to_string(),
            r.delta.to_string(),
        ],
        Err(e) => vec![format!("error: {e}"); EXPECTED.len()],
    };
    VerifyReport {
        checks: EXPECTED
            .iter()
            .zip(actual)
            .map(|(&(name, expected), actual)| Check {
                name,
                expected: expected.to_string(),
                actual,
            })
            .collect(),
    }
}
