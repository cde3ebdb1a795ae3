//! Built-in angles against exact big-integer values of `floor(c * 2^128)`.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use torus_ap::FixedAngle;

fn two_128() -> BigUint {
    BigUint::one() << 128u32
}

fn to_u128(v: &BigUint) -> u128 {
    let digits = v.to_u64_digits();
    assert!(digits.len() <= 2, "value exceeds 128 bits");
    digits.iter().rev().fold(0u128, |acc, &d| acc << 64 | d as u128)
}

#[test]
fn golden_mean_conjugate() {
    // (sqrt(5) - 1) / 2 * 2^128 = (sqrt(5 * 2^256) - 2^128) / 2
    let s = (BigUint::from(5u32) << 256u32).sqrt();
    let expect = (s - two_128()) >> 1u32;
    assert_eq!(FixedAngle::GOLDEN.raw(), to_u128(&expect));
}

#[test]
fn sqrt2_minus_one() {
    let s = (BigUint::from(2u32) << 256u32).sqrt();
    let expect = s - two_128();
    assert_eq!(FixedAngle::SQRT2_MINUS_ONE.raw(), to_u128(&expect));
}

#[test]
fn truncated_liouville() {
    let factorials = [1u32, 2, 6, 24, 120, 720];
    let ten = BigUint::from(10u32);
    let denom: BigUint = Pow::pow(&ten, 720u32);
    let numer: BigUint = factorials.iter().map(|&f| Pow::pow(&ten, 720 - f)).sum();
    let expect = (numer << 128u32) / denom;
    assert_eq!(FixedAngle::LIOUVILLE.raw(), to_u128(&expect));
}

#[test]
fn named_angles_parse() {
    assert_eq!("golden".parse::<FixedAngle>().unwrap(), FixedAngle::GOLDEN);
    assert_eq!("sqrt2-1".parse::<FixedAngle>().unwrap(), FixedAngle::SQRT2_MINUS_ONE);
    assert_eq!("liouville".parse::<FixedAngle>().unwrap(), FixedAngle::LIOUVILLE);
}
