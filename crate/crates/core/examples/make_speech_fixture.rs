//! Regenerate the bundled speech-like recording used by the AEC preset.
//!
//! `cargo run -p fkf-core --example make_speech_fixture [seconds] [seed]`

use std::path::Path;

use fkf_core::sim::presets::BUNDLED_SPEECH_WAV;
use fkf_core::sim::source::write_wav;
use fkf_core::sim::speech::speech_like;

pub const FIXTURE_SECONDS: f64 = 20.0;
pub const FIXTURE_SEED: u64 = 16_000;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seconds = args.next().map(|s| s.parse()).transpose()?.unwrap_or(FIXTURE_SECONDS);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(FIXTURE_SEED);
    let samples = speech_like(16_000.0, seconds, seed);
    write_wav(Path::new(BUNDLED_SPEECH_WAV), &samples, 16_000)?;
    println!("wrote {} samples to {BUNDLED_SPEECH_WAV}", samples.len());
    Ok(())
}
