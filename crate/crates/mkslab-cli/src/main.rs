fn main() {
    println!("mkslab");
}
