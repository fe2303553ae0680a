fn main() {
    // CLI entry point; wired up in holonomy::cli.
    eprintln!("not yet wired");
    std::process::exit(2);
}
