fn main() { std::process::exit(twospin::cli::run()) }
