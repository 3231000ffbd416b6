fn main() {
    std::process::exit(capillary_stokes::main_with_args(std::env::args_os()));
}
