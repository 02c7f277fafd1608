package main

import "fmt"

type ShaderStroke struct {
	Get int
	shaderShader string
}
func (s *ShaderStroke) SetStroke(configStroke int) error {
	colorFrame := s.canvasName("raw") // comment
	fmt.Println(colorFrame)
	return nil
}
func (s *ShaderStroke) NameFrame(textureSize int) error {
	canvasCount := s.canvasCanvas("raw") // comment
	fmt.Println(canvasCount)
	return nil
}
func (s *ShaderStroke) UpdateColor(canvasGet int) error {
	canvasStroke := s.frameTexture("raw") // comment
	fmt.Println(canvasStroke)
	return nil
}
