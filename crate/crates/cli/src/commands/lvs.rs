use anyhow::{ensure, Result};
use lvs_core::raster::{load_gray, load_mask, save_scalar_field, save_scalar_field_png};
use lvs_core::salience::{compute_lvs_map, LvsParams};

use super::{collect_samples, ensure_dir, graph_params, pick, process};
use crate::{Config, LvsArgs, Report};

pub fn params(args: &LvsArgs, config: &Config) -> Result<LvsParams> {
    let defaults = LvsParams::default();
    let params = LvsParams {
        background_radius: pick(args.r_b, config.get("r_b")?, defaults.background_radius),
        smoothing: pick(args.k, config.get("k")?, defaults.smoothing),
        graph: graph_params(&args.graph, config)?,
    };
    params.validate()?;
    Ok(params)
}

pub fn run(args: &LvsArgs, config: &Config) -> Result<Report> {
    let params = params(args, config)?;
    let (samples, failures) = collect_samples(
        &[args.image.as_ref(), args.mask.as_ref()],
        &[args.image_dir.as_ref(), args.mask_dir.as_ref()],
    )?;
    if let Some(dir) = &args.out_dir {
        ensure_dir(dir)?;
    }
    let (_, report) = process(&samples, failures, |s| {
        let image = load_gray(&s.paths[0])?;
        let mask = load_mask(&s.paths[1])?;
        ensure!(
            image.same_shape(&mask),
            "image is {}x{} but mask is {}x{}",
            image.width(),
            image.height(),
            mask.width(),
            mask.height()
        );
        let field = compute_lvs_map(&image, &mask, &params)?;
        let (field_path, viz_path) = match (&args.out_field, &args.out_dir) {
            (Some(f), _) => (f.clone(), args.out_viz.clone()),
            (None, Some(dir)) => (
                dir.join(format!("{}.pfm", s.stem)),
                args.viz.then(|| dir.join(format!("{}_lvs.png", s.stem))),
            ),
            (None, None) => unreachable!("clap requires an output"),
        };
        save_scalar_field(&field, &field_path)?;
        let mut written = vec![field_path];
        if let Some(v) = viz_path {
            save_scalar_field_png(&field, &v)?;
            written.push(v);
        }
        Ok(((), written))
    });
    Ok(report)
}
