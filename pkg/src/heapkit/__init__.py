"""Full heaps over affine Dynkin diagrams and their representations."""
