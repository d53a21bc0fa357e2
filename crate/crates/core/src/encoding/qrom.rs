use super::{address_controls, EncodingError, QromSpec};
use crate::circuit::{Circuit, Gate, GateKind, QubitRole};
use crate::funcprep::{normalize, to_truth_table, NormalizeOptions, NormalizedWords, Scheme, DEFAULT_MAX_ROWS};
use crate::pla::PlaTable;
use std::f64::consts::TAU;

/// One multi-controlled X per hot data bit, controls spelling the full address.
/// Qubits: `n` address then `m` data, data qubit `n + j` holding word bit `m - 1 - j`.
pub fn synth_basis(spec: &QromSpec) -> Result<Circuit, EncodingError> {
    let spec = QromSpec::new(spec.address_bits, spec.word_bits, spec.pairs.clone())?;
    let (n, m) = (spec.address_bits, spec.word_bits);
    let mut roles = vec![QubitRole::Address; n];
    roles.extend(std::iter::repeat(QubitRole::Data).take(m));
    let mut c = Circuit::with_roles(roles);
    for &(a, x) in &spec.pairs {
        let controls = address_controls(a, n);
        for j in 0..m {
            if x >> (m - 1 - j) & 1 == 1 {
                c.push(Gate::mcx(controls.clone(), n + j));
            }
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMode {
    /// One word per address in the amplitude angle; phase unused.
    Plain,
    /// Words packed pairwise in address order: even one in the amplitude angle, odd one in the phase.
    Dense,
    /// Significand in the amplitude angle, exponent in the phase.
    Improved,
}

fn check_angle(index: usize, value: f64) -> Result<f64, EncodingError> {
    if value.is_finite() && (0.0..TAU).contains(&value) {
        Ok(value)
    } else {
        Err(EncodingError::ValueOutOfRange { index, value })
    }
}

/// `n` address qubits and one data qubit. For each address, a multi-controlled
/// `RX(2 theta)` then, after all of those, a multi-controlled `RZ(phi)`, so that
/// `P(data = 1 | address) = sin^2 theta`. Zero angles emit no gate.
///
/// `normalized` holds one entry per pair of `spec`, in the same order.
pub fn synth_angle(spec: &QromSpec, mode: AngleMode, normalized: &NormalizedWords) -> Result<Circuit, EncodingError> {
    if normalized.values.len() != spec.pairs.len() {
        return Err(EncodingError::LengthMismatch(normalized.values.len(), spec.pairs.len()));
    }
    let mut slots: Vec<(u64, f64, f64)> = Vec::new();
    let mut address_bits = spec.address_bits;
    match mode {
        AngleMode::Plain => {
            for (j, &(a, _)) in spec.pairs.iter().enumerate() {
                slots.push((a, check_angle(j, normalized.values[j])?, check_angle(j, normalized.phases[j])?));
            }
        }
        AngleMode::Improved => {
            if normalized.scheme != Scheme::FloatLike {
                return Err(EncodingError::NeedsFloatLike);
            }
            for (j, &(a, _)) in spec.pairs.iter().enumerate() {
                let theta = check_angle(j, normalized.significands[j])?;
                let is_zero_word = normalized.exponents[j] as usize >= normalized.word_bits;
                let phi = if is_zero_word { 0.0 } else { check_angle(j, normalized.phases[j])? };
                slots.push((a, theta, phi));
            }
        }
        AngleMode::Dense => {
            let mut order: Vec<usize> = (0..spec.pairs.len()).collect();
            order.sort_by_key(|&j| spec.pairs[j].0);
            for (k, chunk) in order.chunks(2).enumerate() {
                let theta = check_angle(chunk[0], normalized.values[chunk[0]])?;
                let phi = match chunk.get(1) {
                    Some(&j) => check_angle(j, normalized.values[j])?,
                    None => 0.0,
                };
                slots.push((k as u64, theta, phi));
            }
            let groups = slots.len().max(2);
            address_bits = (usize::BITS - (groups - 1).leading_zeros()) as usize;
        }
    }
    let n = address_bits;
    let mut roles = vec![QubitRole::Address; n];
    roles.push(QubitRole::Data);
    let mut c = Circuit::with_roles(roles);
    for &(a, theta, _) in &slots {
        if theta != 0.0 {
            c.push(Gate::controlled(GateKind::Rx(2.0 * theta), address_controls(a, n), n));
        }
    }
    for &(a, theta, phi) in &slots {
        if phi != 0.0 && (theta != 0.0 || mode == AngleMode::Dense) {
            c.push(Gate::controlled(GateKind::Rz(phi), address_controls(a, n), n));
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QromEncoding {
    Basis,
    Angle,
    DenseAngle,
    ImprovedAngle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QromOptions {
    /// Word interpretation for the angle encodings; improved-angle always uses the float scheme.
    pub scheme: Scheme,
    pub normalize: NormalizeOptions,
    pub max_rows: u64,
}

impl Default for QromOptions {
    fn default() -> Self {
        QromOptions { scheme: Scheme::FixedPoint01, normalize: NormalizeOptions::default(), max_rows: DEFAULT_MAX_ROWS }
    }
}

/// Memory image from a PLA table (expanded, don't-cares to 0) to a circuit.
pub fn qrom_pipeline(table: &PlaTable, encoding: QromEncoding, options: &QromOptions) -> Result<Circuit, EncodingError> {
    let tt = to_truth_table(table, options.max_rows)?;
    let spec = QromSpec::from_truth_table(&tt)?;
    match encoding {
        QromEncoding::Basis => synth_basis(&spec),
        QromEncoding::Angle | QromEncoding::DenseAngle => {
            let norm = normalize(&spec.words(), spec.word_bits, options.scheme, options.normalize)?;
            let mode = if encoding == QromEncoding::Angle { AngleMode::Plain } else { AngleMode::Dense };
            synth_angle(&spec, mode, &norm)
        }
        QromEncoding::ImprovedAngle => {
            let norm = normalize(&spec.words(), spec.word_bits, Scheme::FloatLike, options.normalize)?;
            synth_angle(&spec, AngleMode::Improved, &norm)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Control;
    use crate::simulate::{run_reversible, run_statevector, BitString};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn single_pair_negative_control() {
        let c = synth_basis(&QromSpec::new(1, 1, vec![(0, 1)]).unwrap()).unwrap();
        assert_eq!(c.gates, vec![Gate::mcx(vec![Control::neg(0)], 1)]);
    }

    #[test]
    fn duplicate_address() {
        assert_eq!(QromSpec::new(2, 1, vec![(1, 1), (1, 0)]), Err(EncodingError::DuplicateAddress(1)));
    }

    #[test]
    fn basis_readout() {
        let words = [3u64, 0, 2, 1, 1, 3, 0, 2];
        let spec = QromSpec::new(3, 2, words.iter().enumerate().map(|(a, &x)| (a as u64, x)).collect()).unwrap();
        let c = synth_basis(&spec).unwrap();
        assert_eq!(c.num_qubits, 5);
        for a in 0..8u64 {
            let out = run_reversible(&c, &BitString::from_value(a << 2, 5)).unwrap();
            assert_eq!(out.slice(3, 2).value(), words[a as usize]);
            assert_eq!(out.slice(0, 3).value(), a);
        }
    }

    fn prob_data_one(c: &Circuit, address: usize) -> f64 {
        let n = c.num_qubits - 1;
        let sv = run_statevector(c, address << 1).unwrap();
        sv.marginal(&[n])[1]
    }

    #[test]
    fn angle_probability_contract() {
        let spec = QromSpec::new(2, 4, vec![(0, 0), (1, 8), (2, 15), (3, 4)]).unwrap();
        let norm = normalize(&spec.words(), 4, Scheme::FixedPoint04, Default::default()).unwrap();
        let c = synth_angle(&spec, AngleMode::Plain, &norm).unwrap();
        assert_eq!(c.num_qubits, 3);
        assert_eq!(c.len(), 3);
        for (j, &(a, _)) in spec.pairs.iter().enumerate() {
            let want = norm.values[j].sin().powi(2);
            assert!((prob_data_one(&c, a as usize) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_turn_sets_data() {
        let spec = QromSpec::new(1, 2, vec![(1, 1)]).unwrap();
        let norm = NormalizedWords {
            scheme: Scheme::Factor,
            word_bits: 2,
            values: vec![FRAC_PI_2],
            phases: vec![0.0],
            significands: vec![],
            exponents: vec![],
            z_max: 0,
            hidden_bit: false,
        };
        let c = synth_angle(&spec, AngleMode::Plain, &norm).unwrap();
        assert!((prob_data_one(&c, 1) - 1.0).abs() < 1e-12);
        assert!(prob_data_one(&c, 0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_rejected() {
        let spec = QromSpec::new(1, 2, vec![(1, 1)]).unwrap();
        let mut norm = normalize(&[1], 2, Scheme::FixedPoint01, Default::default()).unwrap();
        norm.values[0] = 7.0;
        assert!(matches!(
            synth_angle(&spec, AngleMode::Plain, &norm),
            Err(EncodingError::ValueOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn improved_stores_phase() {
        let spec = QromSpec::new(2, 8, vec![(0, 0b1011), (1, 0b1000_0000), (2, 0)]).unwrap();
        let norm = normalize(&spec.words(), 8, Scheme::FloatLike, Default::default()).unwrap();
        let c = synth_angle(&spec, AngleMode::Improved, &norm).unwrap();
        let rx = c.gates.iter().filter(|g| matches!(g.kind, GateKind::Rx(_))).count();
        let rz = c.gates.iter().filter(|g| matches!(g.kind, GateKind::Rz(_))).count();
        // Word 0b1000_0000 has exponent 0, so phase 0; the zero word stores nothing.
        assert_eq!((rx, rz), (2, 1));
        let plain = normalize(&spec.words(), 8, Scheme::FixedPoint01, Default::default()).unwrap();
        assert_eq!(synth_angle(&spec, AngleMode::Improved, &plain), Err(EncodingError::NeedsFloatLike));
    }

    #[test]
    fn dense_packs_pairs() {
        let spec = QromSpec::new(2, 4, vec![(0, 4), (1, 8), (2, 2), (3, 0)]).unwrap();
        let norm = normalize(&spec.words(), 4, Scheme::FixedPoint04, Default::default()).unwrap();
        let c = synth_angle(&spec, AngleMode::Dense, &norm).unwrap();
        assert_eq!(c.num_qubits, 2);
        assert!((prob_data_one(&c, 0) - 1f64.sin().powi(2)).abs() < 1e-12);
        assert!((prob_data_one(&c, 1) - 0.5f64.sin().powi(2)).abs() < 1e-12);
        let rz: Vec<f64> = c.gates.iter().filter_map(|g| match g.kind {
            GateKind::Rz(a) => Some(a),
            _ => None,
        }).collect();
        assert_eq!(rz, vec![2.0]);
    }

    #[test]
    fn pipeline_identity_memory() {
        let text = ".i 3\n.o 3\n000 000\n001 001\n010 010\n011 011\n1-- 1--\n.e\n";
        let table = crate::pla::parse_pla(text).unwrap();
        let c = qrom_pipeline(&table, QromEncoding::Basis, &QromOptions::default()).unwrap();
        for a in 0..8u64 {
            let out = run_reversible(&c, &BitString::from_value(a << 3, 6)).unwrap();
            let want = if a < 4 { a } else { 4 };
            assert_eq!(out.slice(3, 3).value(), want);
        }
        let sparse = crate::pla::parse_pla(".i 2\n.o 2\n01 11\n.e\n").unwrap();
        let c = qrom_pipeline(&sparse, QromEncoding::Basis, &QromOptions::default()).unwrap();
        let out = run_reversible(&c, &BitString::from_value(0b1000, 4)).unwrap();
        assert_eq!(out.slice(2, 2).value(), 0);
    }
}
