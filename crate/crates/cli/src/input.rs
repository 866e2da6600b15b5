//! Space loading from the shared input flags.

use maghom::space::{parse_distance_csv, parse_edge_list, parse_space_json, Family, IoError};
use maghom::QuasiMetricSpace;

use crate::{CliError, SpaceArgs};

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Hypothesis(e.to_string())
    }
}

/// Loads the space and returns it along with a stable description used in
/// cache keys.
pub fn load_space(args: &SpaceArgs) -> Result<(QuasiMetricSpace, String), CliError> {
    if let Some(family) = &args.family {
        let (name, mut params) = family
            .split_first()
            .map(|(n, p)| (n.clone(), p.to_vec()))
            .ok_or_else(|| CliError::Usage("--family needs a name".into()))?;
        if name == "random_graph" && params.len() == 2 {
            if let Some(seed) = args.seed {
                params.push(seed.to_string());
            }
        }
        let fam = Family::parse(&name, &params).map_err(|e| CliError::Usage(e.to_string()))?;
        let space = fam
            .build()
            .map_err(|e| CliError::Hypothesis(e.to_string()))?;
        let desc = format!("family:{} {}", name, params.join(" "));
        return Ok((space, desc));
    }
    if let Some(path) = &args.matrix {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path, e)))?;
        let space = if path.ends_with(".json") {
            parse_space_json(&text)?
        } else {
            parse_distance_csv(&text)?
        };
        return Ok((space, format!("matrix:{}", path)));
    }
    if let Some(path) = &args.edges {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path, e)))?;
        let space = parse_edge_list(&text, args.directed)?;
        return Ok((space, format!("edges:{} directed:{}", path, args.directed)));
    }
    Err(CliError::Usage(
        "select an input with --family, --matrix, or --edges".into(),
    ))
}
