use crate::streams::BitStream;

/// `a ⊕ b`. Membership of the result in `Either(C)` means `a ∈ C` or
/// `b ∈ C`; that side is undecidable and is not checked.
pub fn either_encode(a: &BitStream, b: &BitStream) -> BitStream {
    BitStream::join(a, b)
}

/// `A(⟨⟨i, j⟩, n⟩) = B(⟨i, n⟩)`: every column `⟨i, j⟩` of the output
/// repeats column `i` of the input. Not injective in general.
pub fn some_to_many(b: &BitStream) -> BitStream {
    BitStream::some_to_many(b)
}

/// `A(⟨⟨i, j⟩, n⟩) = B(⟨i, ⟨j, n⟩⟩)`: column `⟨i, j⟩` of the output is
/// column `j` of column `i` of the input. The position map is injective.
pub fn some_to_many_one(b: &BitStream) -> BitStream {
    BitStream::some_to_many_one(b)
}
