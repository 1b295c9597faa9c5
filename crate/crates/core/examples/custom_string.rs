//! A string given by its atoms: definition file round trip, counting,
//! dimension estimate.
use zeta_strings::fractal_strings::{counting_function, dimension, StringDefinition};

fn main() -> Result<(), zeta_strings::Error> {
    // lengths 2^{-n/2} with multiplicity 2^n, written as scales x = 2^{n/2}
    let atoms: Vec<[String; 3]> = (0..60)
        .map(|n| {
            [
                2f64.powf(n as f64 / 2.0).to_string(),
                2f64.powi(n).to_string(),
                "0".into(),
            ]
        })
        .collect();
    let def = StringDefinition::Atoms { atoms };
    let text = def.to_json();
    let eta = StringDefinition::parse(&text)?.build()?;
    assert_eq!(StringDefinition::parse(&text)?, def);
    println!("N(10) = {}", counting_function(&eta, 10.0)?.re);
    let d = dimension(&eta)?;
    println!(
        "dimension {:.4} (estimated: {}), exact 2",
        d.value, d.estimated
    );
    let cantor = StringDefinition::parse(r#"{"kind": "cantor", "params": {"truncation": "100"}}"#)?
        .build()?;
    println!("{}", StringDefinition::describe(&cantor).to_json());
    Ok(())
}
