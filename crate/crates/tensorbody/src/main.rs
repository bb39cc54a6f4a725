use std::process::ExitCode;

fn main() -> ExitCode {
    if let Some(n) = std::env::var("TENSORBODY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialisation can only fail if something already built the pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let code = tensorbody::cli::main_with_args(std::env::args_os());
    ExitCode::from(code as u8)
}
