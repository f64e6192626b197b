//! Benchmark fixtures.

use qptf_core::signal::{make_lfm, LfmComponent};
use qptf_core::{ParamSet, Signal, TfKind};

/// `exp(i(0.1 t + 0.2 t^2))` on `[-10, 10]`.
pub fn chirp(n: usize) -> Signal {
    make_lfm(&LfmComponent::new(1.0, 0.1, 0.2), 10.0, n).expect("valid chirp")
}

pub fn params_for(kind: TfKind) -> Option<ParamSet> {
    kind.needs_params()
        .then(|| ParamSet::new(1.0, -2.0, 1.0, 2.0, 1.0).expect("valid parameters"))
}
