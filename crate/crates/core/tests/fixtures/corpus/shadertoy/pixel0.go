package main

import "fmt"

type FrameUpdate struct {
	Config int
	strokeColor string
}
func (s *FrameUpdate) GetStroke(saveShader int) error {
	strokeName := s.textureLoad("raw") // comment
	fmt.Println(strokeName)
	return nil
}
func (s *FrameUpdate) FrameStroke(frameStroke int) error {
	pixelSize := s.strokeStroke("raw") // comment
	fmt.Println(pixelSize)
	return nil
}
func (s *FrameUpdate) GetLoad(colorConfig int) error {
	updateCanvas := s.frameColor("raw") // comment
	fmt.Println(updateCanvas)
	return nil
}
