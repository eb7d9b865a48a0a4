use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{PauliKind, PauliProduct};

pub const FIXTURE_NAMES: [&str; 6] = ["bitflip3", "phaseflip3", "shor9", "five_qubit", "steane7", "reed_muller15"];

/// Parity-check matrix of the [7,4,3] Hamming code.
pub const HAMMING_H: [&str; 3] = ["1010101", "0110011", "0001111"];

/// X-type checks of the 15-qubit Reed–Muller code.
pub const RM15_HX: [&str; 4] = ["100001100111101", "010010101011011", "001100101100111", "001011010010111"];

/// Z-type checks of the 15-qubit Reed–Muller code as usually printed. These
/// columns follow the binary-counting qubit order (column c has label c),
/// not the order of [`RM15_HX`], so the two matrices are not orthogonal as
/// they stand. Use [`rm15_hz_aligned`] for the consistent pair.
pub const RM15_HZ: [&str; 10] = [
    "001100010000001",
    "010010010000001",
    "100001010000001",
    "110100100000000",
    "010100001000001",
    "100100000100001",
    "110000010010000",
    "110000000001001",
    "100100010000100",
    "010100010000010",
];

/// Label of each column of [`RM15_HX`], reading the column top to bottom as
/// a 4-bit number.
pub fn rm15_column_labels() -> Vec<usize> {
    (0..15).map(|j| RM15_HX.iter().fold(0, |acc, row| (acc << 1) | usize::from(row.as_bytes()[j] == b'1'))).collect()
}

/// [`RM15_HZ`] with its columns reordered to the qubit order of [`RM15_HX`].
pub fn rm15_hz_aligned() -> Vec<String> {
    let labels = rm15_column_labels();
    RM15_HZ.iter().map(|row| labels.iter().map(|&l| row.as_bytes()[l - 1] as char).collect()).collect()
}

/// A small stabilizer code with one logical qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFixture {
    pub name: String,
    pub n: usize,
    pub stabilizers: Vec<PauliProduct>,
    pub logical_x: PauliProduct,
    pub logical_z: PauliProduct,
}

impl CodeFixture {
    /// Syndrome bit i is set when the error anticommutes with generator i.
    pub fn syndrome(&self, error: &PauliProduct) -> BitVec {
        BitVec::from_bools(&self.stabilizers.iter().map(|s| s.anticommutes_unchecked(error)).collect::<Vec<_>>())
    }

    /// Checks the commutation relations between generators and logicals.
    pub fn is_consistent(&self) -> bool {
        let all_commute = |p: &PauliProduct| self.stabilizers.iter().all(|s| !s.anticommutes_unchecked(p));
        self.stabilizers.iter().all(all_commute)
            && all_commute(&self.logical_x)
            && all_commute(&self.logical_z)
            && self.logical_x.anticommutes_unchecked(&self.logical_z)
    }
}

fn parse_all(rows: &[&str]) -> Vec<PauliProduct> {
    rows.iter().map(|s| s.parse().expect("fixture strings are valid")).collect()
}

fn css_rows(rows: &[&str], kind: PauliKind) -> Vec<PauliProduct> {
    rows.iter()
        .map(|r| {
            let v = BitVec::from_str01(r).expect("fixture rows are binary");
            PauliProduct::from_support(v.len(), &v, kind)
        })
        .collect()
}

fn build(name: &str, stabs: Vec<PauliProduct>, lx: &str, lz: &str) -> CodeFixture {
    CodeFixture {
        name: name.to_string(),
        n: stabs[0].n(),
        stabilizers: stabs,
        logical_x: lx.parse().expect("valid"),
        logical_z: lz.parse().expect("valid"),
    }
}

/// Generator and logical lists for the named code.
pub fn code_fixture(name: &str) -> Result<CodeFixture> {
    Ok(match name {
        "bitflip3" => build(name, parse_all(&["ZZI", "IZZ"]), "XXX", "ZII"),
        "phaseflip3" => build(name, parse_all(&["XXI", "IXX"]), "ZZZ", "XII"),
        "shor9" => build(
            name,
            parse_all(&[
                "XXXXXXIII",
                "IIIXXXXXX",
                "ZZIIIIIII",
                "IZZIIIIII",
                "IIIZZIIII",
                "IIIIZZIII",
                "IIIIIIZZI",
                "IIIIIIIZZ",
            ]),
            "XXXXXXXXX",
            "ZZZZZZZZZ",
        ),
        "five_qubit" => build(name, parse_all(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]), "XXXXX", "ZZZZZ"),
        "steane7" => build(
            name,
            parse_all(&["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]),
            "XXXXXXX",
            "ZZZZZZZ",
        ),
        "reed_muller15" => {
            let mut stabs = css_rows(&RM15_HX, PauliKind::X);
            let hz = rm15_hz_aligned();
            stabs.extend(css_rows(&hz.iter().map(String::as_str).collect::<Vec<_>>(), PauliKind::Z));
            build(name, stabs, &"X".repeat(15), &"Z".repeat(15))
        }
        other => return Err(Error::UnknownCode(other.to_string())),
    })
}
