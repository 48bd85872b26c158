//! Depth-one decomposition and the scheme built from it.

use jetsplit::{
    build_universal_scheme, depth_one_decompose, reference_contact_flow, BigRational,
    DepthOneRepresentation, FloatHamiltonian, GadgetKind, JetPoint, ProlongedRealization,
    RationalHamiltonian, Scheme, Tolerance,
};

use crate::convergence::{convergence_study, ConvergenceTable, Sweep};
use crate::error::{LabError, Result};

/// `H` over ℚ, its representation and the scheme built from it.
pub struct Universal {
    pub hamiltonian: RationalHamiltonian,
    pub representation: DepthOneRepresentation<BigRational>,
    pub scheme: Scheme,
}

impl Universal {
    pub fn new(
        text: &str,
        outer_order: u32,
        gadget: GadgetKind,
        realization: ProlongedRealization,
    ) -> Result<Self> {
        let hamiltonian: RationalHamiltonian = text.parse()?;
        let representation = depth_one_decompose(&hamiltonian);
        if representation.reconstruct() != hamiltonian {
            return Err(LabError::Unsupported(format!(
                "decomposition of {hamiltonian} does not reconstruct it"
            )));
        }
        let scheme = build_universal_scheme(&representation, outer_order, gadget, realization)?;
        Ok(Self {
            hamiltonian,
            representation,
            scheme,
        })
    }

    pub fn float_hamiltonian(&self) -> FloatHamiltonian {
        self.hamiltonian.to_float()
    }

    /// Convergence against an adaptive solution of the full contact flow.
    pub fn convergence(&self, sweep: &Sweep) -> Result<ConvergenceTable> {
        let ham = self.float_hamiltonian();
        let reference = |times: &[f64], _h: f64| -> Result<Vec<JetPoint>> {
            Ok(reference_contact_flow(
                &ham,
                &sweep.z0,
                sweep.t0,
                times,
                Tolerance::default(),
            )?)
        };
        convergence_study(&self.scheme_label(), &self.scheme, reference, sweep)
    }

    fn scheme_label(&self) -> String {
        jetsplit::ContactStep::label(&self.scheme)
    }
}

/// Multi-line listing of `s₀`, `d₀` and the bracket pairs.
pub fn describe(rep: &DepthOneRepresentation<BigRational>) -> String {
    let mut out = format!("s0 = {}\nd0 = {}\n", rep.s0, rep.d0);
    for (i, (s, d)) in rep.pairs.iter().enumerate() {
        out.push_str(&format!("[s{0}, d{0}] = [{s}, {d}]\n", i + 1));
    }
    out
}
