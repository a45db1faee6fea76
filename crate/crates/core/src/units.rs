//! Natural units: frequencies in multiples of the Raman transition frequency
//! `omega21`, times in `1/omega21`, and `hbar = 1`.
//!
//! SI conversion is only applied at the configuration boundary.

/// Raman transition frequency of methanol (2837 cm^-1), in s^-1.
pub const OMEGA21_HZ: f64 = 85.05e12;

pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const AVOGADRO: f64 = 6.022_140_76e23;
pub const DEBYE: f64 = 3.335_64e-30;

/// Molar volume of an ideal gas at 0 C and 1 atm, m^3/mol.
pub const IDEAL_GAS_MOLAR_VOLUME: f64 = 22.414e-3;

/// Effective molecular diameter used for the layer model, m.
pub const METHANOL_DIAMETER: f64 = 1.0e-10;

/// Transition dipole moment used for methanol, C m.
pub const METHANOL_DIPOLE: f64 = 1.70 * DEBYE;

pub fn thz_to_natural(f_thz: f64) -> f64 {
    f_thz * 1e12 / OMEGA21_HZ
}

pub fn natural_to_thz(f: f64) -> f64 {
    f * OMEGA21_HZ / 1e12
}

pub fn fs_to_natural(t_fs: f64) -> f64 {
    t_fs * 1e-15 * OMEGA21_HZ
}

pub fn natural_to_fs(t: f64) -> f64 {
    t / OMEGA21_HZ * 1e15
}

/// Chirp rate in THz/fs to natural units.
pub fn thz_per_fs_to_natural(rate: f64) -> f64 {
    rate * 1e27 / (OMEGA21_HZ * OMEGA21_HZ)
}

pub fn seconds_to_natural(t: f64) -> f64 {
    t * OMEGA21_HZ
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_conversions() {
        assert!((fs_to_natural(54.8) - 4.66).abs() < 5e-3);
        assert!((thz_to_natural(1.0) - 1.176e-2).abs() < 1e-5);
        assert!((thz_to_natural(850.0) - 10.0).abs() < 1e-2);
        assert!((natural_to_fs(fs_to_natural(123.0)) - 123.0).abs() < 1e-12);
        assert!((natural_to_thz(thz_to_natural(7.0)) - 7.0).abs() < 1e-12);
    }
}
