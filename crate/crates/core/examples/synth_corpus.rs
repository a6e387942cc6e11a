//! Writes a deterministic synthetic grayscale corpus as binary PGM files.
//!
//! usage: synth_corpus <dir> [count=5] [size=512] [seed=20241]

use std::path::PathBuf;

fn main() -> rmg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(dir) = args.first().map(PathBuf::from) else {
        eprintln!("usage: synth_corpus <dir> [count] [size] [seed]");
        std::process::exit(2);
    };
    let arg = |i: usize, default: u64| {
        args.get(i)
            .map_or(default, |s| s.parse().expect("numeric argument"))
    };
    let (count, size, seed) = (arg(1, 5) as usize, arg(2, 512) as usize, arg(3, 20_241));
    std::fs::create_dir_all(&dir)
        .map_err(|e| rmg::Error::Validation(format!("{}: {e}", dir.display())))?;
    for (i, img) in rmg::harness::synthetic_corpus(count, size, size, seed)
        .iter()
        .enumerate()
    {
        img.save(dir.join(format!("scene{i:02}.pgm")))?;
    }
    Ok(())
}
