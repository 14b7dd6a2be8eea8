"""Linear box regression from activations to part boxes."""
