//! `E = V · I · t` energy model for embedded signers.
//!
//! Work is given either as CPU cycles (converted with a per-cycle constant)
//! or as wall time at the profile's voltage and current. Transmission cost is
//! a per-bit constant.

use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyProfile {
    pub name: String,
    pub volts: f64,
    pub amps: f64,
    /// Clock rate for processors, bit rate for radios.
    pub clock_hz: f64,
    pub nj_per_cycle: f64,
    pub nj_per_bit: f64,
}

/// `V · I / f`, in nanojoules.
pub fn nj_per_event(volts: f64, amps: f64, rate_hz: f64) -> f64 {
    volts * amps / rate_hz * 1e9
}

/// A processor profile whose per-cycle constant follows from its electrical
/// parameters. `nj_per_bit` is taken from whatever radio it is paired with.
pub fn derive_profile(name: &str, volts: f64, amps: f64, clock_hz: f64, nj_per_bit: f64) -> EnergyProfile {
    EnergyProfile {
        name: name.to_owned(),
        volts,
        amps,
        clock_hz,
        nj_per_cycle: nj_per_event(volts, amps, clock_hz),
        nj_per_bit,
    }
}

/// A radio profile: the rate is the bit rate and each "cycle" is one bit.
pub fn derive_radio(name: &str, volts: f64, amps: f64, bitrate: f64) -> EnergyProfile {
    let nj = nj_per_event(volts, amps, bitrate);
    EnergyProfile { name: name.to_owned(), volts, amps, clock_hz: bitrate, nj_per_cycle: nj, nj_per_bit: nj }
}

pub const BUILTIN_PROFILES: [&str; 2] = ["avr-atmega2560", "nrf24l01"];

/// The 8-bit AVR board (5 V, 20 mA, 16 MHz) with an nRF24L01 transceiver
/// (3.3 V, 11.3 mA, 2 Mbps), and the transceiver alone. The AVR profile pins
/// the rounded constants 6.25 nJ/cycle and 18.65 nJ/bit.
pub fn builtin_profile(name: &str) -> Option<EnergyProfile> {
    match name {
        "avr-atmega2560" => Some(EnergyProfile {
            name: name.to_owned(),
            volts: 5.0,
            amps: 0.020,
            clock_hz: 16e6,
            nj_per_cycle: 6.25,
            nj_per_bit: 18.65,
        }),
        "nrf24l01" => Some(derive_radio(name, 3.3, 0.0113, 2e6)),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Work {
    Cycles(u64),
    Duration(Duration),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub compute_mj: f64,
    pub comm_uj: f64,
}

pub fn energy_compute(profile: &EnergyProfile, work: Work, bits_tx: u64) -> EnergyEstimate {
    let compute_mj = match work {
        Work::Cycles(c) => c as f64 * profile.nj_per_cycle * 1e-6,
        Work::Duration(t) => t.as_secs_f64() * profile.volts * profile.amps * 1e3,
    };
    EnergyEstimate { compute_mj, comm_uj: bits_tx as f64 * profile.nj_per_bit * 1e-3 }
}
