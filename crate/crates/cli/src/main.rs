use std::panic;

fn main() {
    panic::set_hook(Box::new(|info| {
        eprintln!("multitile: internal error: {info}");
    }));
    let code = panic::catch_unwind(|| multitile_cli::run(std::env::args_os())).unwrap_or(3);
    std::process::exit(code);
}
