use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DBG_PERSIST_LOG")).init();
    let out = dbg_persist::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
