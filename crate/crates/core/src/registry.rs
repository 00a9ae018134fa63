//! Named codes and atomic Legos.

use crate::code::{LegRole, XpGroup};
use crate::error::{Error, Result};
use crate::lego::Lego;

#[derive(Clone, Debug)]
pub struct CodeEntry {
    pub name: &'static str,
    pub note: &'static str,
    pub group: XpGroup,
    pub legs: Vec<LegRole>,
}

impl CodeEntry {
    /// The entry as a Lego; states get a dense shadow when small enough.
    pub fn lego(&self) -> Result<Lego> {
        let l = Lego::with_legs(self.group.clone(), self.legs.clone())?;
        let k = l.group.codewords()?.codewords.len();
        if k == 1 && l.n() <= crate::dense::DENSE_LIMIT {
            l.with_state_shadow()
        } else {
            Ok(l)
        }
    }

    /// The stabilizer group of the code on the physical legs.
    pub fn code_group(&self) -> Result<XpGroup> {
        self.lego()?.code_group()
    }
}

fn roles(s: &str) -> Vec<LegRole> {
    s.chars().map(|c| if c == 'L' { LegRole::Logical } else { LegRole::Physical }).collect()
}

fn entry(name: &'static str, note: &'static str, precision: u32, rows: &[&str], legs: &str) -> CodeEntry {
    let group = XpGroup::from_strs(precision, rows).expect("registry rows are well formed");
    let legs = if legs.is_empty() { vec![LegRole::Physical; group.n()] } else { roles(legs) };
    CodeEntry { name, note, group, legs }
}

/// Quantum Reed-Muller [[15,1,3]]: qubits are the nonzero vectors of GF(2)^4.
fn reed_muller_15() -> CodeEntry {
    let bit = |v: usize, i: usize| (v >> i) & 1;
    let mut rows: Vec<(Vec<i64>, Vec<i64>, i64)> = Vec::new();
    for i in 0..4 {
        let x: Vec<i64> = (1..16).map(|v| bit(v, i) as i64).collect();
        rows.push((x, vec![0; 15], 0));
    }
    for i in 0..4 {
        let z: Vec<i64> = (1..16).map(|v| bit(v, i) as i64).collect();
        rows.push((vec![0; 15], z, 0));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let z: Vec<i64> = (1..16).map(|v| (bit(v, i) * bit(v, j)) as i64).collect();
            rows.push((vec![0; 15], z, 0));
        }
    }
    CodeEntry {
        name: "rm15",
        note: "quantum Reed-Muller [[15,1,3]] code, N=2",
        group: XpGroup::from_rows(2, &rows).expect("well formed"),
        legs: vec![LegRole::Physical; 15],
    }
}

pub fn registry() -> Vec<CodeEntry> {
    vec![
        entry("zero", "atomic |0>", 2, &["0|1|0"], ""),
        entry("hadamard", "atomic Hadamard tensor (Choi state), legs: in, out", 2, &["10|01|0", "01|10|0"], "LP"),
        entry("phase", "atomic phase tensor P at N=8 (Choi state), legs: in, out", 8, &["11|06|2", "00|17|0"], "LP"),
        entry("repetition", "2-qubit repetition state |00>+|11>", 2, &["11|00|0", "00|11|0"], ""),
        entry("H-magic", "magic state |0>+e^{i pi/4}|1>", 8, &["1|6|2"], ""),
        entry(
            "code-722",
            "[[7,2,2]] code, N=8",
            8,
            &["1110000|0070000|9", "0001111|0001234|14", "0000000|1070000|0", "0000000|0170000|0", "0000000|0004444|8"],
            "",
        ),
        entry(
            "code-722-traced",
            "[[7,2,2]] self-traced on legs 1,2",
            8,
            &["10000|70000|9", "01111|01234|14", "00000|04444|8"],
            "",
        ),
        entry(
            "state-v1",
            "6-qubit lego state for the first [[7,1,3]] construction; legs 1,2 logical",
            8,
            &[
                "100111|000000|0",
                "010101|000000|0",
                "001110|003404|1",
                "000000|400444|0",
                "000000|040440|0",
                "000000|004404|0",
            ],
            "LLPPPP",
        ),
        entry(
            "state-v2",
            "6-qubit lego state for the second [[7,1,3]] construction; legs 1,2 logical",
            8,
            &[
                "100111|200266|0",
                "010101|000206|0",
                "001110|003664|1",
                "000000|400444|0",
                "000000|040440|0",
                "000000|004404|0",
            ],
            "LLPPPP",
        ),
        entry(
            "steane-xp",
            "Steane-like [[7,1,3]] XP code, N=8",
            8,
            &[
                "1010101|0000000|0",
                "0110011|0340034|2",
                "0001111|0000070|1",
                "0000000|4040404|0",
                "0000000|0440044|0",
                "0000000|0004444|0",
            ],
            "",
        ),
        entry(
            "xp-713-b",
            "second [[7,1,3]] XP code, N=8, not LU-equivalent to Steane",
            8,
            &[
                "1010101|0020046|0",
                "0110011|0360432|2",
                "0001111|0002072|13",
                "0000000|4040404|0",
                "0000000|0440044|0",
                "0000000|0004444|0",
            ],
            "",
        ),
        entry(
            "code-711",
            "[[7,1,1]] code with d_Z=1, d_X=3, N=2",
            2,
            &[
                "1100011|0000000|0",
                "0001111|0000000|0",
                "0000000|1010101|2",
                "0000000|0110101|0",
                "0000000|0001100|2",
                "0000000|0000011|2",
            ],
            "",
        ),
        entry(
            "code-812",
            "[[8,1,2]] code with transversal T-type gate, N=2",
            2,
            &[
                "11001100|00000000|0",
                "00111100|00000000|0",
                "00000011|00000000|0",
                "00000000|10010111|2",
                "00000000|01010111|0",
                "00000000|00110000|2",
                "00000000|00001100|2",
            ],
            "",
        ),
        entry(
            "steane",
            "Steane [[7,1,3]] code, N=2",
            2,
            &[
                "1010101|0000000|0",
                "0110011|0000000|0",
                "0001111|0000000|0",
                "0000000|1010101|0",
                "0000000|0110011|0",
                "0000000|0001111|0",
            ],
            "",
        ),
        entry(
            "code-422",
            "[[4,2,2]] code as a Choi state: physical legs 1-4, logical legs 5-6",
            2,
            &[
                "111100|000000|0",
                "000000|111100|0",
                "110010|000000|0",
                "000000|101010|0",
                "101001|000000|0",
                "000000|110001|0",
            ],
            "PPPPLL",
        ),
        reed_muller_15(),
    ]
}

pub fn lookup(name: &str) -> Result<CodeEntry> {
    let all = registry();
    let names: Vec<&str> = all.iter().map(|e| e.name).collect();
    all.iter().find(|e| e.name == name).cloned().ok_or_else(|| Error::NotFound { name: name.to_string(), candidates: names.join(", ") })
}
