namespace ribbonvol {
}  // namespace ribbonvol
