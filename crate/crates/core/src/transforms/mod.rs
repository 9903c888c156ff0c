//! Exact transports between related equations.

mod avron_herbst;
mod lens;
mod resample;

pub use avron_herbst::{avron_herbst, frame_integrals, FrameIntegrals};
pub use lens::{lens_forward, lens_h, lens_inverse, lens_roundtrip_check, FieldSampler, LensFrame, LensReport};
pub use resample::{resample_scaled, MAX_SCALE};
