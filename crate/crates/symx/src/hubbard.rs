//! Parametrised Fermi-Hubbard style circuits under Jordan-Wigner encoding,
//! with the matching Hamiltonian observable and number-parity symmetries.
//!
//! Layout
//! ------
//! Sites of the `rows x cols` grid are ordered along a snake path; site `s`
//! of the path owns spin-up qubit `s` and spin-down qubit `sites + s`, so
//! each parity operator is a contiguous Z block. Each spin sector carries a
//! Jordan-Wigner line in path order.
//!
//! Circuit pattern (fixed, documented contract of this builder)
//! -------------------------------------------------------------
//! A trotter-style layer is five rounds. With `N = rows*cols` sites:
//!
//!   even layers: [onsite] [hop A] [onsite] [hop B] [hop A]
//!   odd  layers: [onsite] [hop A] [onsite] [hop A] [hop B]
//!
//! * onsite round: one diagonal interaction gate per site on the qubit pair
//!   `(s, sites+s)`, N gates, acting across the spin sectors;
//! * hop A round: per sector, gates on JW-adjacent position pairs
//!   (0,1),(2,3),... - N/2 gates per sector;
//! * hop B round: per sector, pairs (1,2),(3,4),... - N/2-1 gates per sector.
//!
//! Every hop-round gate carries a fermionic swap; when the two orbitals
//! currently at those positions are nearest neighbours on the grid the gate
//! is a parametrised hopping interaction combined with the swap, otherwise
//! it is the bare swap. One layer is `5N - 2` two-qubit gates, and the
//! default depth of `2N` layers closes the swap network (the final orbital
//! ordering is the identity) while alternating across/within rounds keeps
//! the gate split at one half onsite, one quarter per spin sector. For the
//! 2x2 lattice this gives 8 layers x 18 gates = 144, for 2x3 it gives
//! 12 x 28 = 336.
//!
//! Each layer carries two interaction parameters, one angle shared by its
//! onsite gates and one by its hopping gates, drawn uniformly from
//! [0, DEFAULT_ANGLE_WIDTH). The layer angles act like randomised trotter
//! step sizes, so different seeds produce genuinely different, structured
//! output states rather than scrambled ones.

use std::collections::HashSet;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::expansion::SymmetrySet;
use crate::pauli::{Pauli, PauliString, Sign};
use crate::state::{Observable, PureState};

/// Site grid with Hamiltonian couplings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    /// Hopping amplitude t.
    pub t: f64,
    /// Onsite repulsion U.
    pub u: f64,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, t: f64, u: f64) -> Result<Self> {
        if rows < 1 || cols < 1 {
            return Err(Error::UnsupportedLattice(format!(
                "{rows}x{cols} grid has an empty dimension"
            )));
        }
        Ok(Self { rows, cols, t, u })
    }

    /// The 8-qubit benchmark lattice (t = 1, U = 2).
    pub fn two_by_two() -> Self {
        Self { rows: 2, cols: 2, t: 1.0, u: 2.0 }
    }

    /// The 12-qubit benchmark lattice (t = 1, U = 2).
    pub fn two_by_three() -> Self {
        Self { rows: 2, cols: 3, t: 1.0, u: 2.0 }
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn qubits(&self) -> usize {
        2 * self.sites()
    }

    /// Depth at which the swap network returns to the identity ordering.
    pub fn default_layers(&self) -> usize {
        2 * self.sites()
    }

    /// Snake-path coordinates of path index `s`.
    fn site_coords(&self, s: usize) -> (usize, usize) {
        let r = s / self.cols;
        let c = s % self.cols;
        if r % 2 == 0 {
            (r, c)
        } else {
            (r, self.cols - 1 - c)
        }
    }

    /// Grid edges as sorted pairs of snake-path indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let sites = self.sites();
        let mut coord_to_path = vec![0usize; sites];
        for s in 0..sites {
            let (r, c) = self.site_coords(s);
            coord_to_path[r * self.cols + c] = s;
        }
        let mut edges = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let here = coord_to_path[r * self.cols + c];
                if c + 1 < self.cols {
                    let right = coord_to_path[r * self.cols + c + 1];
                    edges.push((here.min(right), here.max(right)));
                }
                if r + 1 < self.rows {
                    let below = coord_to_path[(r + 1) * self.cols + c];
                    edges.push((here.min(below), here.max(below)));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Half-filled alternating occupation: spin-up orbital occupied on even
    /// path sites, spin-down on odd ones. Bit q of the result sets qubit q.
    pub fn initial_occupation_bits(&self) -> usize {
        let sites = self.sites();
        let mut bits = 0usize;
        for s in 0..sites {
            if s % 2 == 0 {
                bits |= 1 << s;
            } else {
                bits |= 1 << (sites + s);
            }
        }
        bits
    }

    fn occupied_up(&self) -> usize {
        (self.sites() + 1) / 2
    }

    fn occupied_down(&self) -> usize {
        self.sites() / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GateKind {
    /// Diagonal onsite interaction across the two spin sectors.
    Onsite,
    /// Hopping interaction merged with a fermionic swap, within one sector.
    HopSwap { spin: Spin },
    /// Bare fermionic swap, within one sector.
    Swap { spin: Spin },
}

impl GateKind {
    pub fn is_across_sectors(&self) -> bool {
        matches!(self, GateKind::Onsite)
    }

    pub fn spin(&self) -> Option<Spin> {
        match self {
            GateKind::Onsite => None,
            GateKind::HopSwap { spin } | GateKind::Swap { spin } => Some(*spin),
        }
    }
}

/// One two-qubit gate with its noise-location annotation.
#[derive(Debug, Clone)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: (usize, usize),
    pub angle: Option<f64>,
    unitary: Array2<Complex64>,
}

impl Gate {
    pub fn unitary(&self) -> &Array2<Complex64> {
        &self.unitary
    }
}

/// Ordered gate list with the parameters and seed that produced it.
#[derive(Debug, Clone)]
pub struct NoisyCircuit {
    pub lattice: LatticeSpec,
    pub layers: usize,
    pub seed: u64,
    pub gates: Vec<Gate>,
    pub params: Vec<f64>,
    final_order: Vec<usize>,
}

impl NoisyCircuit {
    pub fn n(&self) -> usize {
        self.lattice.qubits()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn noise_location_count(&self, kind: crate::noise::NoiseKind) -> usize {
        self.gates.len() * kind.locations_per_gate()
    }

    /// Orbital ordering after the full circuit (identity at default depth).
    pub fn final_site_order(&self) -> &[usize] {
        &self.final_order
    }

    pub fn to_json(&self) -> String {
        let doc = CircuitDoc {
            rows: self.lattice.rows,
            cols: self.lattice.cols,
            t: self.lattice.t,
            u: self.lattice.u,
            layers: self.layers,
            seed: self.seed,
            gates: self
                .gates
                .iter()
                .map(|g| GateDoc { kind: g.kind, qubits: g.qubits, angle: g.angle })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("circuit serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CircuitDoc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidState(format!("circuit json: {e}")))?;
        let lattice = LatticeSpec::new(doc.rows, doc.cols, doc.t, doc.u)?;
        let rebuilt = build_circuit(&lattice, doc.layers, doc.seed)?;
        // The document is authoritative; verify it matches the deterministic
        // rebuild rather than trusting two code paths to agree silently.
        if rebuilt.gates.len() != doc.gates.len()
            || rebuilt
                .gates
                .iter()
                .zip(&doc.gates)
                .any(|(g, d)| g.kind != d.kind || g.qubits != d.qubits || g.angle != d.angle)
        {
            return Err(Error::InvalidState(
                "circuit document does not match its seed/layer rebuild".into(),
            ));
        }
        Ok(rebuilt)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CircuitDoc {
    rows: usize,
    cols: usize,
    t: f64,
    u: f64,
    layers: usize,
    seed: u64,
    gates: Vec<GateDoc>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct GateDoc {
    #[serde(flatten)]
    kind: GateKind,
    qubits: (usize, usize),
    angle: Option<f64>,
}

/// Sign-corrected number-parity symmetry group {I, G_up, G_down, G_tot}.
#[derive(Debug, Clone)]
pub struct HubbardSymmetries {
    pub g_up: PauliString,
    pub g_down: PauliString,
    pub g_tot: PauliString,
    pub group: SymmetrySet,
}

fn onsite_matrix(theta: f64) -> Array2<Complex64> {
    let mut m = Array2::eye(4);
    m[(3, 3)] = Complex64::from_polar(1.0, -theta);
    m
}

fn fswap_matrix() -> Array2<Complex64> {
    let mut m: Array2<Complex64> = Array2::zeros((4, 4));
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 3)] = Complex64::new(-1.0, 0.0);
    m
}

fn hopswap_matrix(theta: f64) -> Array2<Complex64> {
    // fswap . exp(-i theta (XX + YY)/2)
    let (c, s) = (theta.cos(), theta.sin());
    let mut m: Array2<Complex64> = Array2::zeros((4, 4));
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 1)] = Complex64::new(0.0, -s);
    m[(1, 2)] = Complex64::new(c, 0.0);
    m[(2, 1)] = Complex64::new(c, 0.0);
    m[(2, 2)] = Complex64::new(0.0, -s);
    m[(3, 3)] = Complex64::new(-1.0, 0.0);
    m
}

/// Angle-sharing structure of the ansatz parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMode {
    /// One onsite angle and one hopping angle per layer (ansatz-style).
    PerLayer,
    /// Every interaction gate draws its own angle.
    PerGate,
}

/// Default interaction-angle range, 0.55 pi. Layer angles act like
/// randomised trotter step sizes; this range keeps the ideal states
/// trotter-like, with output energies spread over both signs, instead of
/// scrambling them into the flat high-temperature background.
pub const DEFAULT_ANGLE_WIDTH: f64 = 0.55 * std::f64::consts::PI;

/// Builds the parametrised circuit described in the module docs.
pub fn build_circuit(spec: &LatticeSpec, layers: usize, seed: u64) -> Result<NoisyCircuit> {
    build_circuit_customised(spec, layers, seed, DEFAULT_ANGLE_WIDTH, ParamMode::PerLayer)
}

/// Same pattern with a custom angle range and parameter-sharing mode.
pub fn build_circuit_customised(
    spec: &LatticeSpec,
    layers: usize,
    seed: u64,
    width: f64,
    mode: ParamMode,
) -> Result<NoisyCircuit> {
    if spec.rows != 2 {
        return Err(Error::UnsupportedLattice(format!(
            "{}x{} grid: the swap-network pattern is defined for 2-row snakes",
            spec.rows, spec.cols
        )));
    }
    let mut b = Builder {
        sites: spec.sites(),
        edges: spec.edges().into_iter().collect(),
        rng: ChaCha12Rng::seed_from_u64(seed),
        width,
        mode,
        layer_onsite: 0.0,
        layer_hop: 0.0,
        gates: Vec::new(),
        params: Vec::new(),
        order: (0..spec.sites()).collect(),
    };

    for layer in 0..layers {
        b.begin_layer();
        b.onsite_round();
        b.hop_round(0);
        b.onsite_round();
        if layer % 2 == 0 {
            b.hop_round(1);
            b.hop_round(0);
        } else {
            b.hop_round(0);
            b.hop_round(1);
        }
    }

    Ok(NoisyCircuit {
        lattice: *spec,
        layers,
        seed,
        gates: b.gates,
        params: b.params,
        final_order: b.order,
    })
}

struct Builder {
    sites: usize,
    edges: HashSet<(usize, usize)>,
    rng: ChaCha12Rng,
    width: f64,
    mode: ParamMode,
    layer_onsite: f64,
    layer_hop: f64,
    gates: Vec<Gate>,
    params: Vec<f64>,
    order: Vec<usize>,
}

impl Builder {
    fn draw(&mut self) -> f64 {
        let theta = self.rng.gen_range(0.0..self.width);
        self.params.push(theta);
        theta
    }

    fn begin_layer(&mut self) {
        if self.mode == ParamMode::PerLayer {
            self.layer_onsite = self.draw();
            self.layer_hop = self.draw();
        }
    }

    fn onsite_angle(&mut self) -> f64 {
        match self.mode {
            ParamMode::PerLayer => self.layer_onsite,
            ParamMode::PerGate => self.draw(),
        }
    }

    fn hop_angle(&mut self) -> f64 {
        match self.mode {
            ParamMode::PerLayer => self.layer_hop,
            ParamMode::PerGate => self.draw(),
        }
    }

    fn onsite_round(&mut self) {
        for p in 0..self.sites {
            let theta = self.onsite_angle();
            self.gates.push(Gate {
                kind: GateKind::Onsite,
                qubits: (p, self.sites + p),
                angle: Some(theta),
                unitary: onsite_matrix(theta),
            });
        }
    }

    /// Hop round over position pairs (start, start+1), (start+2, ...).
    /// Both sectors see the same ordering, updated once after the round.
    fn hop_round(&mut self, start: usize) {
        let positions: Vec<usize> = (start..self.sites.saturating_sub(1)).step_by(2).collect();
        for spin in [Spin::Up, Spin::Down] {
            let base = match spin {
                Spin::Up => 0,
                Spin::Down => self.sites,
            };
            for &p in &positions {
                let (a, b) = (self.order[p], self.order[p + 1]);
                let pair = (a.min(b), a.max(b));
                let qubits = (base + p, base + p + 1);
                if self.edges.contains(&pair) {
                    let theta = self.hop_angle();
                    self.gates.push(Gate {
                        kind: GateKind::HopSwap { spin },
                        qubits,
                        angle: Some(theta),
                        unitary: hopswap_matrix(theta),
                    });
                } else {
                    self.gates.push(Gate {
                        kind: GateKind::Swap { spin },
                        qubits,
                        angle: None,
                        unitary: fswap_matrix(),
                    });
                }
            }
        }
        for &p in &positions {
            self.order.swap(p, p + 1);
        }
    }
}

/// Applies the circuit noiselessly to the half-filled initial state.
pub fn ideal_state(circuit: &NoisyCircuit) -> PureState {
    let n = circuit.n();
    let mut psi = PureState::basis_state(n, circuit.lattice.initial_occupation_bits());
    for gate in &circuit.gates {
        psi = psi
            .apply_unitary(gate.unitary(), &[gate.qubits.0, gate.qubits.1])
            .expect("builder gates are unitary and in range");
    }
    psi
}

/// Jordan-Wigner Hamiltonian on the snake ordering used by the builder.
pub fn hamiltonian(spec: &LatticeSpec) -> Observable {
    let sites = spec.sites();
    let n = spec.qubits();
    let mut terms: Vec<(f64, PauliString)> = Vec::new();

    for &(s1, s2) in &spec.edges() {
        for base in [0usize, sites] {
            let (i, j) = (base + s1, base + s2);
            let mut x_word = vec![Pauli::I; n];
            let mut y_word = vec![Pauli::I; n];
            x_word[i] = Pauli::X;
            x_word[j] = Pauli::X;
            y_word[i] = Pauli::Y;
            y_word[j] = Pauli::Y;
            for q in (i + 1)..j {
                x_word[q] = Pauli::Z;
                y_word[q] = Pauli::Z;
            }
            terms.push((-spec.t / 2.0, PauliString::new(x_word, Sign::Plus)));
            terms.push((-spec.t / 2.0, PauliString::new(y_word, Sign::Plus)));
        }
    }

    for s in 0..sites {
        let (i, j) = (s, sites + s);
        let quarter = spec.u / 4.0;
        terms.push((quarter, PauliString::identity(n)));
        terms.push((-quarter, PauliString::single(n, i, Pauli::Z)));
        terms.push((-quarter, PauliString::single(n, j, Pauli::Z)));
        let mut zz = vec![Pauli::I; n];
        zz[i] = Pauli::Z;
        zz[j] = Pauli::Z;
        terms.push((quarter, PauliString::new(zz, Sign::Plus)));
    }

    Observable::new(terms).expect("hamiltonian is non-empty").simplified()
}

/// Sign-corrected parity operators stabilising the initial occupation.
pub fn symmetries(spec: &LatticeSpec) -> HubbardSymmetries {
    let sites = spec.sites();
    let n = spec.qubits();
    let up_qubits: Vec<usize> = (0..sites).collect();
    let down_qubits: Vec<usize> = (sites..2 * sites).collect();
    let g_up = PauliString::z_string(n, &up_qubits, Sign::from_parity(spec.occupied_up() % 2 == 1));
    let g_down = PauliString::z_string(
        n,
        &down_qubits,
        Sign::from_parity(spec.occupied_down() % 2 == 1),
    );
    let g_tot = g_up.mul(&g_down).expect("parity operators commute");
    let group = SymmetrySet::new(vec![
        PauliString::identity(n),
        g_up.clone(),
        g_down.clone(),
        g_tot.clone(),
    ])
    .expect("parity group is well-formed");
    HubbardSymmetries { g_up, g_down, g_tot, group }
}

/// Qubit relabelling that exchanges the two spin sectors.
pub fn spin_exchange_permutation(spec: &LatticeSpec) -> Vec<usize> {
    let sites = spec.sites();
    (0..2 * sites)
        .map(|q| if q < sites { q + sites } else { q - sites })
        .collect()
}
