use anyhow::{ensure, Context, Result};
use lvs_core::augment::{augment_image, AugmentParams, EditLog};
use lvs_core::raster::{load_gray, load_mask, save_gray_png};
use lvs_core::topology::build_graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{collect_samples, ensure_dir, graph_params, pick, process, write_json};
use crate::config::parse_range;
use crate::{AugmentArgs, Config, Report};

#[derive(Serialize)]
struct CopyLog<'a> {
    sample_id: &'a str,
    copy: usize,
    seed: u64,
    params: &'a AugmentParams,
    #[serde(flatten)]
    log: &'a EditLog,
}

/// Independent generator for one output copy of one input.
pub fn stream(seed: u64, stem: &str, copy: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((stem.len() as u64).to_le_bytes());
    h.update(stem.as_bytes());
    h.update((copy as u64).to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn range_opt<T: std::str::FromStr + Copy>(
    flag: &Option<String>,
    name: &str,
) -> Result<Option<(T, T)>>
where
    T::Err: std::fmt::Display,
{
    flag.as_deref()
        .map(|s| parse_range(s).with_context(|| format!("--{name}")))
        .transpose()
}

pub fn params(args: &AugmentArgs, config: &Config) -> Result<AugmentParams> {
    let d = AugmentParams::default();
    let p = AugmentParams {
        n_range: pick(range_opt(&args.n, "n")?, config.get_range("n")?, d.n_range),
        l_range: pick(range_opt(&args.l, "l")?, config.get_range("l")?, d.l_range),
        l_d_range: pick(
            range_opt(&args.l_d, "l-d")?,
            config.get_range("l_d")?,
            d.l_d_range,
        ),
        t_b: pick(args.t_b, config.get("t_b")?, d.t_b),
        max_attempts: pick(
            args.max_attempts,
            config.get("max_attempts")?,
            d.max_attempts,
        ),
    };
    p.validate()?;
    Ok(p)
}

pub fn run(args: &AugmentArgs, config: &Config) -> Result<Report> {
    let params = params(args, config)?;
    let graph_params = graph_params(&args.graph, config)?;
    let seed = pick(args.seed, config.get("seed")?, 0);
    let copies = pick(args.copies, config.get("copies")?, 1);
    let (samples, failures) = collect_samples(
        &[args.image.as_ref(), args.mask.as_ref()],
        &[args.image_dir.as_ref(), args.mask_dir.as_ref()],
    )?;
    ensure_dir(&args.out_dir)?;
    let (_, report) = process(&samples, failures, |s| {
        let image = load_gray(&s.paths[0])?;
        let mask = load_mask(&s.paths[1])?;
        ensure!(image.same_shape(&mask), "image and mask sizes differ");
        let graph = build_graph(&mask, &graph_params);
        let mut written = Vec::new();
        for copy in 0..copies {
            let mut rng = stream(seed, &s.stem, copy);
            let (out, log) = augment_image(&image, &mask, &graph, &params, &mut rng)?;
            let png = args.out_dir.join(format!("{}_aug{copy}.png", s.stem));
            let json = args.out_dir.join(format!("{}_aug{copy}.json", s.stem));
            save_gray_png(&out, &png)?;
            write_json(
                &json,
                &CopyLog {
                    sample_id: &s.stem,
                    copy,
                    seed,
                    params: &params,
                    log: &log,
                },
            )?;
            written.push(png);
            written.push(json);
        }
        Ok(((), written))
    });
    Ok(report)
}
