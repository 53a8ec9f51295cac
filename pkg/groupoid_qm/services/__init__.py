"""Operations on finite groupoids, their algebras, states and dynamics."""
