# Ring package
