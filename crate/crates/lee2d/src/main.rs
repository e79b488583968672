use clap::Parser;

fn main() {
    // Die quietly on SIGPIPE like other Unix filters; the Rust default turns
    // a downstream `head` into a panic with a backtrace.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = lee2d::cli::Cli::parse();
    if let Err(e) = lee2d::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
